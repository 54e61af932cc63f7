#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "egb/ehyp.hpp"

namespace egb {

/// An ordered internal interface plus the positions of it that are external.
struct Interface {
  std::vector<VertexId> internal;
  std::vector<std::size_t> external;

  std::vector<VertexId> external_vertices() const;
  std::vector<VertexId> strictly_internal() const;
  bool is_external(VertexId v) const;
};

struct ExtendedCospan {
  EHypergraph carrier;
  Interface inputs;
  Interface outputs;

  Word external_input_word() const;
  Word external_output_word() const;
};

class TypeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Side { In, Out };

/// Interface sanity: positions in range and injective, internal maps mono,
/// external vertices top-level, strictly internal vertices nested.
std::vector<Violation> check_interfaces(const ExtendedCospan& c);

/// Monogamous directed acyclic: acyclic carrier, degrees at most 1, and the
/// degree-0 vertices are exactly the interface images. Includes
/// check_interfaces.
std::vector<Violation> is_mda(const ExtendedCospan& c);

/// Typing of hierarchical edges against their nested interfaces.
std::vector<Violation> is_well_typed(const ExtendedCospan& c);

/// Strictly internal inputs (or outputs) that are immediate children of `e`,
/// in interface order.
std::vector<VertexId> box_ports(const ExtendedCospan& c, EdgeId e, Side side);

ExtendedCospan empty_cospan();
ExtendedCospan identity(const Word& w);
ExtendedCospan symmetry(const Word& a, const Word& b);

/// Sequential composition along c1's external outputs and c2's external inputs.
ExtendedCospan compose(const ExtendedCospan& c1, const ExtendedCospan& c2);
ExtendedCospan tensor(const ExtendedCospan& c1, const ExtendedCospan& c2);
/// One fresh e-box with a block per operand.
ExtendedCospan join(const ExtendedCospan& c1, const ExtendedCospan& c2);
ExtendedCospan join_all(const std::vector<ExtendedCospan>& cs);

/// Blocks of interface positions: positions whose vertices are consistent
/// or share a lambda parent. Blocks are listed by first position.
std::vector<std::vector<std::size_t>> interface_partition(const ExtendedCospan& c, Side side);

struct CospanIso {
  Homomorphism carrier;
  std::vector<std::size_t> inputs;   // position in c1 -> position in c2
  std::vector<std::size_t> outputs;
};

/// Isomorphism of extended cospans: carrier iso commuting with the
/// interfaces and preserving order within each interface block.
std::optional<CospanIso> find_cospan_iso(const ExtendedCospan& c1, const ExtendedCospan& c2);

/// Copy with ids renumbered densely in ascending order of the old ids.
ExtendedCospan renumbered(const ExtendedCospan& c);

}  // namespace egb
