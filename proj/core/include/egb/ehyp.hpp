#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "egb/signature.hpp"

namespace egb {

struct VertexId {
  std::uint32_t value = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

/// A vertex or an edge.
struct ElemRef {
  enum class Tag : std::uint8_t { Vertex, Edge };
  Tag tag = Tag::Vertex;
  std::uint32_t id = 0;

  static ElemRef of(VertexId v) { return {Tag::Vertex, v.value}; }
  static ElemRef of(EdgeId e) { return {Tag::Edge, e.value}; }
  bool is_vertex() const { return tag == Tag::Vertex; }
  bool is_edge() const { return tag == Tag::Edge; }
  VertexId vertex() const { return {id}; }
  EdgeId edge() const { return {id}; }

  friend auto operator<=>(const ElemRef&, const ElemRef&) = default;
};

enum class EdgeKind : std::uint8_t { Plain, EBox, LambdaBox };
enum class ParentKind : std::uint8_t { EParent, LamParent };

struct ParentRef {
  EdgeId edge;
  ParentKind kind = ParentKind::EParent;
  friend auto operator<=>(const ParentRef&, const ParentRef&) = default;
};

using BlockId = std::uint32_t;

struct Edge {
  EdgeKind kind = EdgeKind::Plain;
  OpSymbol op;  // Plain only
  std::vector<VertexId> sources;
  std::vector<VertexId> targets;
};

std::string to_string(VertexId v);
std::string to_string(EdgeId e);
std::string to_string(ElemRef x);
std::string to_string(EdgeKind k);

/// Hierarchical e-hypergraph. Ids come from monotonic counters and are never
/// reused. Mutation is unchecked; run validate() to check the invariants.
class EHypergraph {
 public:
  VertexId add_vertex(VertexType t);
  EdgeId add_edge(Edge e);
  EdgeId add_plain(OpSymbol op, std::vector<VertexId> sources, std::vector<VertexId> targets);
  EdgeId add_box(EdgeKind kind, std::vector<VertexId> sources, std::vector<VertexId> targets);

  /// Insert with a caller chosen id; the counter moves past it.
  void insert_vertex(VertexId id, VertexType t);
  void insert_edge(EdgeId id, Edge e);

  void remove_vertex(VertexId v);
  void remove_edge(EdgeId e);

  void set_parent(ElemRef x, std::optional<ParentRef> p);
  void set_block(ElemRef x, std::optional<BlockId> b);

  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }
  bool has(ElemRef x) const { return x.is_vertex() ? has_vertex(x.vertex()) : has_edge(x.edge()); }
  const VertexType& vertex_type(VertexId v) const;
  const Edge& edge(EdgeId e) const;
  Edge& edge_mut(EdgeId e);

  std::optional<ParentRef> parent(ElemRef x) const;
  std::optional<BlockId> block(ElemRef x) const;
  std::optional<ParentRef> parent(VertexId v) const { return parent(ElemRef::of(v)); }
  std::optional<ParentRef> parent(EdgeId e) const { return parent(ElemRef::of(e)); }
  std::optional<BlockId> block(VertexId v) const { return block(ElemRef::of(v)); }
  std::optional<BlockId> block(EdgeId e) const { return block(ElemRef::of(e)); }

  const std::map<VertexId, VertexType>& vertices() const { return vertices_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  const std::map<ElemRef, ParentRef>& parents() const { return parent_; }
  const std::map<ElemRef, BlockId>& blocks() const { return block_; }

  /// Immediate children of `e`, vertices first, each in id order.
  std::vector<ElemRef> children(EdgeId e) const;
  /// Distinct block ids among the children of an EBox, ascending.
  std::vector<BlockId> block_ids(EdgeId e) const;
  /// Fresh block id for a child of `e`.
  BlockId fresh_block(EdgeId e) const;

  std::size_t element_count() const { return vertices_.size() + edges_.size(); }
  std::uint32_t next_vertex_id() const { return next_vertex_; }
  std::uint32_t next_edge_id() const { return next_edge_; }
  /// Moves the counters forward; never backwards.
  void reserve_ids(std::uint32_t vertex, std::uint32_t edge);

 private:
  std::map<VertexId, VertexType> vertices_;
  std::map<EdgeId, Edge> edges_;
  std::map<ElemRef, ParentRef> parent_;
  std::map<ElemRef, BlockId> block_;
  std::uint32_t next_vertex_ = 0;
  std::uint32_t next_edge_ = 0;
};

struct Violation {
  std::string element;
  std::string clause;
  std::string message;
};

std::string to_string(const Violation& v);

/// Checks typing, the forest hierarchy, childless boxes, connectivity closure
/// and the consistency partition. Empty result means valid.
std::vector<Violation> validate(const EHypergraph& g);

std::size_t in_degree(const EHypergraph& g, VertexId v);
std::size_t out_degree(const EHypergraph& g, VertexId v);
bool is_directed_acyclic(const EHypergraph& g);

/// Ancestors of `x`, immediate parent first.
std::vector<ParentRef> predecessors(const EHypergraph& g, ElemRef x);
bool is_top_level(const EHypergraph& g, ElemRef x);
/// The consistency relation: equal, or children of one EBox in one block.
bool consistent(const EHypergraph& g, ElemRef a, ElemRef b);

/// Per-vertex incidence lists.
struct Incidence {
  std::map<VertexId, std::vector<EdgeId>> producers;  // edges with v among targets
  std::map<VertexId, std::vector<EdgeId>> consumers;  // edges with v among sources
};
Incidence incidence(const EHypergraph& g);

struct Homomorphism {
  std::map<VertexId, VertexId> vertices;
  std::map<EdgeId, EdgeId> edges;

  VertexId operator()(VertexId v) const { return vertices.at(v); }
  EdgeId operator()(EdgeId e) const { return edges.at(e); }
  ElemRef operator()(ElemRef x) const;

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;
  friend auto operator<=>(const Homomorphism&, const Homomorphism&) = default;
};

Homomorphism compose(const Homomorphism& first, const Homomorphism& second);
Homomorphism identity_homomorphism(const EHypergraph& g);
bool is_injective(const Homomorphism& h);

/// The four homomorphism clauses.
bool is_homomorphism(const Homomorphism& phi, const EHypergraph& f, const EHypergraph& g);

struct Coproduct {
  EHypergraph graph;
  Homomorphism in1;
  Homomorphism in2;
};

/// `g` keeps its ids; `h` is renumbered after them.
Coproduct coproduct(const EHypergraph& g, const EHypergraph& h);

class PushoutError : public std::runtime_error {
 public:
  PushoutError(int clause, const std::string& message)
      : std::runtime_error("pushout precondition (" + std::to_string(clause) + "): " + message),
        clause_(clause) {}
  int clause() const { return clause_; }

 private:
  int clause_;
};

struct Pushout {
  EHypergraph graph;
  Homomorphism from_x;
  Homomorphism from_y;
};

/// Pushout of x <-f- z -g-> y. Vertices glued by f and g merge, edges never
/// do; parents and blocks of merged vertices spread to everything connected
/// to them that had none. `x` keeps its ids, `y` gets fresh ones. Throws
/// PushoutError naming the failed precondition.
Pushout pushout(const EHypergraph& z, const Homomorphism& f, const EHypergraph& x, const Homomorphism& g,
                const EHypergraph& y);

/// A discrete graph with one vertex per label, ids 0..n-1.
EHypergraph discrete(const Word& w);

/// Bijective homomorphism with homomorphic inverse, or nothing.
std::optional<Homomorphism> find_isomorphism(const EHypergraph& g, const EHypergraph& h);

/// Copy of the elements in `keep` (plus everything they reference) with
/// unchanged ids; parents/blocks outside the kept set are dropped.
EHypergraph induced(const EHypergraph& g, const std::set<ElemRef>& keep);

/// All descendants of `e`, not including `e`.
std::set<ElemRef> descendants(const EHypergraph& g, EdgeId e);

}  // namespace egb
