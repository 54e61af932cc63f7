#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "egb/cospan.hpp"
#include "egb/rewrite.hpp"

namespace egb {

enum class SchemaId { AssocPlus, CommPlus, IdemPlus, DistTensorPlus, DistSeqPlus, DistLambdaPlus, Beta, Eta, LambdaNat };

std::string to_string(SchemaId s);
std::optional<SchemaId> schema_from_string(const std::string& name);
const std::vector<SchemaId>& all_schemas();

class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A schema rule specialised to one site, with the identity match into the
/// graph it was cut from.
struct SchemaInstance {
  RewriteRule rule;
  Match match;
};

/// Anchor edges where `s` applies, ascending. Anchors: the e-box for the
/// plus schemas, the lambda box for DistLambdaPlus/Eta/LambdaNat, the
/// application edge for Beta.
std::vector<EdgeId> find_schema_sites(const ExtendedCospan& g, SchemaId s);

/// Throws ShapeMismatch when the anchor does not fit.
SchemaInstance instantiate_schema(SchemaId s, const ExtendedCospan& g, EdgeId anchor);

/// The cospan cut out by `elems` (same ids), with the given external
/// interfaces followed by the graph's interface vertices nested inside it.
ExtendedCospan sub_cospan(const ExtendedCospan& g, const std::set<ElemRef>& elems, const std::vector<VertexId>& ext_in,
                          const std::vector<VertexId>& ext_out);

/// Contents of one block of an e-box, or the body of a lambda box, with the
/// box ports as external interfaces.
ExtendedCospan inner_cospan(const ExtendedCospan& g, EdgeId box, std::optional<BlockId> block = std::nullopt);

/// Every block of `g` below an e-box, in (box, block) order.
std::vector<ExtendedCospan> all_blocks(const ExtendedCospan& g);

/// At most one e-box, at the top, directly on the interface, with join-free
/// blocks.
bool is_join_normal(const ExtendedCospan& g);

struct NormalizeStep {
  SchemaId schema;
  EdgeId anchor;
};

/// Applies the structural schemas (idempotence, flattening, distributivity)
/// destructively until none applies or `max_steps` is hit.
ExtendedCospan normalize(const ExtendedCospan& g, std::vector<NormalizeStep>* steps = nullptr,
                         std::size_t max_steps = 10000);

}  // namespace egb
