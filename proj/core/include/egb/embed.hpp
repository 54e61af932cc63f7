#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>

#include "egb/ehyp.hpp"

namespace egb {

enum class EmbedMode { Mono, Iso };

struct EmbedOptions {
  EmbedMode mode = EmbedMode::Mono;
  /// Pattern vertices forced onto given target vertices.
  std::map<VertexId, VertexId> pins;
};

/// Enumerates injective homomorphisms from `pattern` into `target` (Mono), or
/// isomorphisms (Iso), in a deterministic order. `visit` returns false to stop.
void for_each_embedding(const EHypergraph& pattern, const EHypergraph& target, const EmbedOptions& options,
                        const std::function<bool(const Homomorphism&)>& visit);

std::vector<Homomorphism> all_embeddings(const EHypergraph& pattern, const EHypergraph& target,
                                         const EmbedOptions& options, std::size_t limit =
                                                                          std::numeric_limits<std::size_t>::max());

/// Cheap isomorphism invariant: equal graphs have equal fingerprints.
std::size_t fingerprint(const EHypergraph& g);

}  // namespace egb
