#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "egb/rewrite.hpp"
#include "egb/schema.hpp"
#include "egb/term.hpp"

namespace egb {

/// ⟨lhs, join(lhs, rhs)⟩: applying it keeps the redex next to its rewrite.
RewriteRule lift_rule(const RewriteRule& r);
RewriteRule lift_rule(const TermRule& r);

struct SaturationConfig {
  std::size_t max_iterations = 16;
  std::size_t max_elements = 2000;
  /// Destructive rules; the driver lifts them.
  std::vector<RewriteRule> rules;
  /// Beta, Eta and LambdaNat are lifted like rules. The structural schemas
  /// always run as normalisation after every application.
  std::vector<SchemaId> schemas;
};

struct TraceEntry {
  std::size_t iteration = 0;
  std::string rule;                  // rule name, or schema name
  std::optional<SchemaId> schema;    // set for schema applications
  EdgeId anchor;                     // schema anchor
  Homomorphism match;                // rule match (lhs -> graph)
  ComplementCase kind = ComplementCase::TopLevel;
  std::size_t normalize_steps = 0;
  std::size_t elements = 0;          // after the step
};

struct SaturationReport {
  std::size_t iterations = 0;
  std::size_t applications = 0;
  std::size_t skipped = 0;           // applied but iso to a seen state
  std::size_t rejected = 0;          // no boundary complement
  std::size_t initial_elements = 0;
  std::size_t final_elements = 0;
  std::size_t elements_created = 0;
  bool fixpoint = false;
  bool limit_exceeded = false;
  std::string limit;                 // "iterations" or "elements"
  std::vector<TraceEntry> trace;
};

struct SaturationResult {
  ExtendedCospan graph;
  SaturationReport report;
};

/// Throws std::invalid_argument on non-positive limits or an invalid input.
SaturationResult saturate(const ExtendedCospan& g, const SaturationConfig& cfg);

/// Re-runs a trace from `g`; yields the saturated graph, ids included.
ExtendedCospan replay(const ExtendedCospan& g, const SaturationConfig& cfg, const std::vector<TraceEntry>& trace);

/// True when `g` itself or some e-box block of `g` is iso to `candidate`.
bool contains_block_iso(const ExtendedCospan& g, const ExtendedCospan& candidate);

/// The block with the fewest edges (first on ties), or `g` when join-free.
ExtendedCospan extract_smallest(const ExtendedCospan& g);

}  // namespace egb
