#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "egb/cospan.hpp"

namespace egb {

/// Two extended cospans with equal external interface words.
struct RewriteRule {
  std::string name;
  ExtendedCospan lhs;
  ExtendedCospan rhs;
};

/// Reports mismatched external words and invalid sides.
std::vector<Violation> check_rule(const RewriteRule& r);

struct Match {
  Homomorphism embedding;  // lhs carrier -> target carrier
  friend auto operator<=>(const Match&, const Match&) = default;
  friend bool operator==(const Match&, const Match&) = default;
};

bool is_convex(const EHypergraph& g, const std::set<VertexId>& vs, const std::set<EdgeId>& es);
bool is_down_closed(const EHypergraph& pattern, const EHypergraph& g, const Homomorphism& m);

/// Injective homomorphisms with convex, down-closed image, sorted.
std::vector<Match> find_convex_matches(const RewriteRule& rule, const ExtendedCospan& g);
std::vector<Match> find_convex_matches(const ExtendedCospan& lhs, const ExtendedCospan& g);

enum class ComplementCase { TopLevel, Nested };

std::string to_string(ComplementCase c);

struct BoundaryComplement {
  /// The complement with internal interfaces `n' - (i' - i) + j` and
  /// `k' - (j' - j) + i`.
  ExtendedCospan cospan;
  std::vector<VertexId> c1;  // images of the rule's external inputs
  std::vector<VertexId> c2;  // images of the rule's external outputs
  ComplementCase kind = ComplementCase::TopLevel;
  std::size_t inputs_from_g = 0;   // length of the n' part of the inputs
  std::size_t outputs_from_g = 0;  // length of the k' part of the outputs
  std::vector<std::size_t> g_input_external;   // positions inside the n' part
  std::vector<std::size_t> g_output_external;  // positions inside the k' part
};

/// Clause numbers follow the extended boundary complement conditions:
/// 1 convex down-closed, 2 mono feet, 3/4 cohabitation in the graph and the
/// complement, 5 interface maps, 6 top-level cospan, 7 nested cospan.
struct ComplementResult {
  std::optional<BoundaryComplement> value;
  int failed_clause = 0;
  std::string reason;
};

ComplementResult boundary_complement(const RewriteRule& rule, const ExtendedCospan& g, const Match& m);

struct RewriteOutcome {
  std::optional<ExtendedCospan> result;
  ComplementCase kind = ComplementCase::TopLevel;
  int failed_clause = 0;
  std::string reason;
};

/// Convex EDPOI rewriting at one match.
RewriteOutcome apply_rewrite(const ExtendedCospan& g, const RewriteRule& rule, const Match& m);

}  // namespace egb
