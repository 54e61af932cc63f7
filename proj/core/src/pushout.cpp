#include <algorithm>
#include <numeric>

#include "egb/ehyp.hpp"

namespace egb {

namespace {

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  std::size_t find(std::size_t a) {
    while (up[a] != a) a = up[a] = up[up[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

void check_side(const EHypergraph& z, const Homomorphism& h, const EHypergraph& side, const char* name) {
  for (const auto& [v, t] : z.vertices()) {
    auto it = h.vertices.find(v);
    if (it == h.vertices.end() || !side.has_vertex(it->second))
      throw std::invalid_argument(std::string("pushout: map into ") + name + " is not total");
    if (!(side.vertex_type(it->second) == t))
      throw std::invalid_argument(std::string("pushout: map into ") + name + " does not preserve labels");
  }
  std::optional<std::vector<ParentRef>> preds;
  std::optional<std::optional<BlockId>> block;
  for (const auto& [v, w] : h.vertices) {
    auto p = predecessors(side, ElemRef::of(w));
    if (!preds) preds = p;
    else if (*preds != p)
      throw PushoutError(2, std::string("images in ") + name + " have different predecessors");
    auto b = side.block(ElemRef::of(w));
    if (!block) block = b;
    else if (*block != b)
      throw PushoutError(4, std::string("images in ") + name + " lie in different consistency blocks");
  }
}

}  // namespace

Pushout pushout(const EHypergraph& z, const Homomorphism& f, const EHypergraph& x, const Homomorphism& g,
                const EHypergraph& y) {
  if (!z.edges().empty()) throw PushoutError(1, "the apex is not discrete");
  check_side(z, f, x, "x");
  check_side(z, g, y, "y");
  for (const auto& [v, t] : z.vertices())
    if (x.parent(f(v)) && y.parent(g(v)))
      throw PushoutError(3, "vertex " + to_string(v) + " is nested on both sides");

  // vertex classes over x + y
  std::vector<VertexId> xs, ys;
  std::map<VertexId, std::size_t> xi, yi;
  for (const auto& [v, t] : x.vertices()) {
    xi[v] = xs.size();
    xs.push_back(v);
  }
  for (const auto& [v, t] : y.vertices()) {
    yi[v] = xs.size() + ys.size();
    ys.push_back(v);
  }
  UnionFind uf(xs.size() + ys.size());
  for (const auto& [v, t] : z.vertices()) uf.unite(xi.at(f(v)), yi.at(g(v)));

  Pushout po;
  EHypergraph& r = po.graph;
  r = x;
  std::map<std::size_t, VertexId> rep;
  for (auto v : xs) {
    std::size_t c = uf.find(xi[v]);
    if (!rep.count(c)) rep[c] = v;
    po.from_x.vertices[v] = rep[c];
  }
  for (auto v : xs)
    if (po.from_x.vertices[v] != v) r.remove_vertex(v);
  for (auto v : ys) {
    std::size_t c = uf.find(yi[v]);
    if (!rep.count(c)) rep[c] = r.add_vertex(y.vertex_type(v));
    po.from_y.vertices[v] = rep[c];
  }
  for (const auto& [id, e] : x.edges()) {
    po.from_x.edges[id] = id;
    Edge& d = r.edge_mut(id);
    for (auto& v : d.sources) v = po.from_x(v);
    for (auto& v : d.targets) v = po.from_x(v);
  }
  for (const auto& [id, e] : y.edges()) {
    Edge d = e;
    for (auto& v : d.sources) v = po.from_y(v);
    for (auto& v : d.targets) v = po.from_y(v);
    po.from_y.edges[id] = r.add_edge(std::move(d));
  }

  // parents: x elements keep theirs (copied with r = x); merged classes take
  // the parent of whichever member has one
  for (auto v : xs)
    if (po.from_x(v) != v) {
      ElemRef dst = ElemRef::of(po.from_x(v));
      if (auto p = x.parent(v); p && !r.parent(dst)) {
        r.set_parent(dst, p);
        r.set_block(dst, x.block(v));
      }
    }
  for (const auto& [yx, p] : y.parents()) {
    ElemRef dst = po.from_y(yx);
    if (r.parent(dst)) continue;
    r.set_parent(dst, ParentRef{po.from_y(p.edge), p.kind});
    r.set_block(dst, y.block(yx));
  }

  // spread parents to parentless components touching nested vertices
  auto inc = incidence(r);
  std::set<ElemRef> visited;
  auto neighbours = [&](ElemRef a) {
    std::vector<ElemRef> out;
    if (a.is_edge()) {
      const Edge& e = r.edge(a.edge());
      for (auto v : e.sources) out.push_back(ElemRef::of(v));
      for (auto v : e.targets) out.push_back(ElemRef::of(v));
    } else {
      for (auto e : inc.producers[a.vertex()]) out.push_back(ElemRef::of(e));
      for (auto e : inc.consumers[a.vertex()]) out.push_back(ElemRef::of(e));
    }
    return out;
  };
  std::vector<ElemRef> all;
  for (const auto& [v, t] : r.vertices()) all.push_back(ElemRef::of(v));
  for (const auto& [e, d] : r.edges()) all.push_back(ElemRef::of(e));
  for (auto start : all) {
    if (r.parent(start) || visited.count(start)) continue;
    std::vector<ElemRef> comp{start}, stack{start};
    visited.insert(start);
    std::set<std::pair<ParentRef, std::optional<BlockId>>> found;
    while (!stack.empty()) {
      ElemRef a = stack.back();
      stack.pop_back();
      for (auto b : neighbours(a)) {
        if (auto p = r.parent(b)) {
          found.insert({*p, r.block(b)});
          continue;
        }
        if (visited.insert(b).second) {
          comp.push_back(b);
          stack.push_back(b);
        }
      }
    }
    if (found.empty()) continue;
    if (found.size() > 1) throw PushoutError(2, "a glued component would inherit two different parents");
    for (auto a : comp) {
      r.set_parent(a, found.begin()->first);
      r.set_block(a, found.begin()->second);
    }
  }
  return po;
}

}  // namespace egb
