#include "egb/ehyp.hpp"

#include <algorithm>
#include <deque>

namespace egb {

std::string to_string(VertexId v) { return "v" + std::to_string(v.value); }
std::string to_string(EdgeId e) { return "e" + std::to_string(e.value); }
std::string to_string(ElemRef x) { return x.is_vertex() ? to_string(x.vertex()) : to_string(x.edge()); }

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Plain:
      return "plain";
    case EdgeKind::EBox:
      return "ebox";
    case EdgeKind::LambdaBox:
      return "lambda";
  }
  return "?";
}

std::string to_string(const Violation& v) { return v.element + " [" + v.clause + "] " + v.message; }

VertexId EHypergraph::add_vertex(VertexType t) {
  VertexId id{next_vertex_++};
  vertices_.emplace(id, std::move(t));
  return id;
}

EdgeId EHypergraph::add_edge(Edge e) {
  EdgeId id{next_edge_++};
  edges_.emplace(id, std::move(e));
  return id;
}

EdgeId EHypergraph::add_plain(OpSymbol op, std::vector<VertexId> sources, std::vector<VertexId> targets) {
  return add_edge(Edge{EdgeKind::Plain, std::move(op), std::move(sources), std::move(targets)});
}

EdgeId EHypergraph::add_box(EdgeKind kind, std::vector<VertexId> sources, std::vector<VertexId> targets) {
  return add_edge(Edge{kind, {}, std::move(sources), std::move(targets)});
}

void EHypergraph::insert_vertex(VertexId id, VertexType t) {
  vertices_.insert_or_assign(id, std::move(t));
  next_vertex_ = std::max(next_vertex_, id.value + 1);
}

void EHypergraph::insert_edge(EdgeId id, Edge e) {
  edges_.insert_or_assign(id, std::move(e));
  next_edge_ = std::max(next_edge_, id.value + 1);
}

void EHypergraph::remove_vertex(VertexId v) {
  vertices_.erase(v);
  parent_.erase(ElemRef::of(v));
  block_.erase(ElemRef::of(v));
}

void EHypergraph::remove_edge(EdgeId e) {
  edges_.erase(e);
  parent_.erase(ElemRef::of(e));
  block_.erase(ElemRef::of(e));
}

void EHypergraph::set_parent(ElemRef x, std::optional<ParentRef> p) {
  if (p) parent_.insert_or_assign(x, *p);
  else parent_.erase(x);
}

void EHypergraph::set_block(ElemRef x, std::optional<BlockId> b) {
  if (b) block_.insert_or_assign(x, *b);
  else block_.erase(x);
}

const VertexType& EHypergraph::vertex_type(VertexId v) const {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw std::out_of_range("no vertex " + to_string(v));
  return it->second;
}

const Edge& EHypergraph::edge(EdgeId e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw std::out_of_range("no edge " + to_string(e));
  return it->second;
}

Edge& EHypergraph::edge_mut(EdgeId e) {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw std::out_of_range("no edge " + to_string(e));
  return it->second;
}

std::optional<ParentRef> EHypergraph::parent(ElemRef x) const {
  auto it = parent_.find(x);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::optional<BlockId> EHypergraph::block(ElemRef x) const {
  auto it = block_.find(x);
  if (it == block_.end()) return std::nullopt;
  return it->second;
}

std::vector<ElemRef> EHypergraph::children(EdgeId e) const {
  std::vector<ElemRef> out;
  for (const auto& [x, p] : parent_)
    if (p.edge == e) out.push_back(x);
  return out;
}

std::vector<BlockId> EHypergraph::block_ids(EdgeId e) const {
  std::set<BlockId> ids;
  for (const auto& [x, p] : parent_)
    if (p.edge == e)
      if (auto b = block(x)) ids.insert(*b);
  return {ids.begin(), ids.end()};
}

BlockId EHypergraph::fresh_block(EdgeId e) const {
  auto ids = block_ids(e);
  return ids.empty() ? 0 : ids.back() + 1;
}

void EHypergraph::reserve_ids(std::uint32_t vertex, std::uint32_t edge) {
  next_vertex_ = std::max(next_vertex_, vertex);
  next_edge_ = std::max(next_edge_, edge);
}

namespace {

bool is_box(EdgeKind k) { return k != EdgeKind::Plain; }

}  // namespace

std::vector<Violation> validate(const EHypergraph& g) {
  std::vector<Violation> out;
  auto bad = [&](ElemRef x, const char* clause, std::string msg) {
    out.push_back({to_string(x), clause, std::move(msg)});
  };

  for (const auto& [id, e] : g.edges()) {
    ElemRef x = ElemRef::of(id);
    bool ends_ok = true;
    for (const auto* side : {&e.sources, &e.targets})
      for (auto v : *side)
        if (!g.has_vertex(v)) {
          bad(x, "incidence", "refers to missing vertex " + to_string(v));
          ends_ok = false;
        }
    if (!ends_ok) continue;
    if (e.kind == EdgeKind::Plain) {
      auto check = [&](const std::vector<VertexId>& vs, const Word& w, const char* side) {
        if (vs.size() != w.size()) {
          bad(x, "typing", std::string(side) + " arity " + std::to_string(vs.size()) + " expected " +
                               std::to_string(w.size()));
          return;
        }
        for (std::size_t i = 0; i < vs.size(); ++i)
          if (!(g.vertex_type(vs[i]) == w[i]))
            bad(x, "typing", std::string(side) + " " + std::to_string(i) + " has " +
                                 to_string(g.vertex_type(vs[i])) + " expected " + to_string(w[i]));
      };
      check(e.sources, e.op.inputs, "source");
      check(e.targets, e.op.outputs, "target");
    }
  }

  for (const auto& [x, p] : g.parents()) {
    if (!g.has(x)) {
      bad(x, "hierarchy", "parent entry for missing element");
      continue;
    }
    if (!g.has_edge(p.edge)) {
      bad(x, "hierarchy", "parent " + to_string(p.edge) + " is missing");
      continue;
    }
    EdgeKind k = g.edge(p.edge).kind;
    if (!is_box(k)) bad(x, "hierarchy", "parent " + to_string(p.edge) + " is not hierarchical");
    else if ((p.kind == ParentKind::EParent) != (k == EdgeKind::EBox))
      bad(x, "hierarchy", "parent kind does not match the kind of " + to_string(p.edge));
  }
  if (!out.empty()) return out;

  // forest: walking up must terminate
  std::size_t limit = g.edges().size() + 1;
  for (const auto& [x, p] : g.parents()) {
    ElemRef cur = x;
    std::size_t steps = 0;
    while (auto q = g.parent(cur)) {
      cur = ElemRef::of(q->edge);
      if (++steps > limit || cur == x) {
        bad(x, "hierarchy", "element is its own ancestor");
        break;
      }
    }
  }

  std::map<EdgeId, std::size_t> child_count;
  for (const auto& [x, p] : g.parents()) ++child_count[p.edge];
  for (const auto& [id, e] : g.edges())
    if (is_box(e.kind) && child_count[id] == 0) bad(ElemRef::of(id), "childless", "hierarchical edge has no children");

  for (const auto& [id, e] : g.edges()) {
    auto pe = g.parent(id);
    for (const auto* side : {&e.sources, &e.targets})
      for (auto v : *side) {
        if (g.parent(v) != pe)
          bad(ElemRef::of(v), "connectivity",
              "parent differs from that of incident edge " + to_string(id));
        else if (pe && pe->kind == ParentKind::EParent && g.block(v) != g.block(ElemRef::of(id)))
          bad(ElemRef::of(v), "consistency", "block differs from that of incident edge " + to_string(id));
      }
  }

  for (const auto& [x, b] : g.blocks()) {
    auto p = g.parent(x);
    if (!p || p->kind != ParentKind::EParent) bad(x, "consistency", "block assigned outside an e-box");
  }
  for (const auto& [x, p] : g.parents())
    if (p.kind == ParentKind::EParent && !g.block(x)) bad(x, "consistency", "e-box child without a block");

  for (const auto& [id, e] : g.edges())
    if (e.kind == EdgeKind::EBox && child_count[id] > 0 && g.block_ids(id).size() < 2)
      bad(ElemRef::of(id), "consistency", "e-box with a single block");

  return out;
}

std::size_t in_degree(const EHypergraph& g, VertexId v) {
  std::size_t n = 0;
  for (const auto& [id, e] : g.edges()) n += std::count(e.targets.begin(), e.targets.end(), v);
  return n;
}

std::size_t out_degree(const EHypergraph& g, VertexId v) {
  std::size_t n = 0;
  for (const auto& [id, e] : g.edges()) n += std::count(e.sources.begin(), e.sources.end(), v);
  return n;
}

Incidence incidence(const EHypergraph& g) {
  Incidence inc;
  for (const auto& [id, e] : g.edges()) {
    for (auto v : e.targets) inc.producers[v].push_back(id);
    for (auto v : e.sources) inc.consumers[v].push_back(id);
  }
  return inc;
}

bool is_directed_acyclic(const EHypergraph& g) {
  auto inc = incidence(g);
  std::map<EdgeId, std::size_t> indeg;
  for (const auto& [id, e] : g.edges()) {
    std::size_t n = 0;
    for (auto v : e.sources) n += inc.producers[v].size();
    indeg[id] = n;
  }
  std::deque<EdgeId> ready;
  for (const auto& [id, n] : indeg)
    if (n == 0) ready.push_back(id);
  std::size_t done = 0;
  while (!ready.empty()) {
    EdgeId id = ready.front();
    ready.pop_front();
    ++done;
    for (auto v : g.edge(id).targets)
      for (auto c : inc.consumers[v]) {
        auto cnt = std::count(g.edge(c).sources.begin(), g.edge(c).sources.end(), v);
        indeg[c] -= static_cast<std::size_t>(cnt);
        if (indeg[c] == 0) ready.push_back(c);
      }
  }
  return done == g.edges().size();
}

std::vector<ParentRef> predecessors(const EHypergraph& g, ElemRef x) {
  std::vector<ParentRef> out;
  ElemRef cur = x;
  while (auto p = g.parent(cur)) {
    out.push_back(*p);
    cur = ElemRef::of(p->edge);
    if (out.size() > g.edges().size()) break;
  }
  return out;
}

bool is_top_level(const EHypergraph& g, ElemRef x) { return !g.parent(x).has_value(); }

bool consistent(const EHypergraph& g, ElemRef a, ElemRef b) {
  if (a == b) return true;
  auto pa = g.parent(a);
  auto pb = g.parent(b);
  if (!pa || !pb || pa->kind != ParentKind::EParent || !(*pa == *pb)) return false;
  return g.block(a) == g.block(b);
}

ElemRef Homomorphism::operator()(ElemRef x) const {
  return x.is_vertex() ? ElemRef::of(vertices.at(x.vertex())) : ElemRef::of(edges.at(x.edge()));
}

Homomorphism compose(const Homomorphism& first, const Homomorphism& second) {
  Homomorphism h;
  for (const auto& [a, b] : first.vertices) h.vertices[a] = second.vertices.at(b);
  for (const auto& [a, b] : first.edges) h.edges[a] = second.edges.at(b);
  return h;
}

Homomorphism identity_homomorphism(const EHypergraph& g) {
  Homomorphism h;
  for (const auto& [v, t] : g.vertices()) h.vertices[v] = v;
  for (const auto& [e, d] : g.edges()) h.edges[e] = e;
  return h;
}

bool is_injective(const Homomorphism& h) {
  std::set<VertexId> vs;
  for (const auto& [a, b] : h.vertices)
    if (!vs.insert(b).second) return false;
  std::set<EdgeId> es;
  for (const auto& [a, b] : h.edges)
    if (!es.insert(b).second) return false;
  return true;
}

bool is_homomorphism(const Homomorphism& phi, const EHypergraph& f, const EHypergraph& g) {
  for (const auto& [v, t] : f.vertices()) {
    auto it = phi.vertices.find(v);
    if (it == phi.vertices.end() || !g.has_vertex(it->second)) return false;
    if (!(g.vertex_type(it->second) == t)) return false;
  }
  for (const auto& [id, e] : f.edges()) {
    auto it = phi.edges.find(id);
    if (it == phi.edges.end() || !g.has_edge(it->second)) return false;
    const Edge& d = g.edge(it->second);
    if (d.kind != e.kind) return false;
    if (e.kind == EdgeKind::Plain && !(d.op == e.op)) return false;
    if (d.sources.size() != e.sources.size() || d.targets.size() != e.targets.size()) return false;
    for (std::size_t i = 0; i < e.sources.size(); ++i)
      if (phi.vertices.at(e.sources[i]) != d.sources[i]) return false;
    for (std::size_t i = 0; i < e.targets.size(); ++i)
      if (phi.vertices.at(e.targets[i]) != d.targets[i]) return false;
  }
  for (const auto& [x, p] : f.parents()) {
    auto q = g.parent(phi(x));
    if (!q || q->kind != p.kind || q->edge != phi(p.edge)) return false;
  }
  // blocks: same block in f implies same block in g
  std::map<std::pair<EdgeId, BlockId>, BlockId> image;
  for (const auto& [x, b] : f.blocks()) {
    auto p = f.parent(x);
    if (!p) return false;
    auto gb = g.block(phi(x));
    if (!gb) return false;
    auto [it, fresh] = image.emplace(std::make_pair(p->edge, b), *gb);
    if (!fresh && it->second != *gb) return false;
  }
  return true;
}

Coproduct coproduct(const EHypergraph& g, const EHypergraph& h) {
  Coproduct c;
  c.graph = g;
  c.in1 = identity_homomorphism(g);
  for (const auto& [v, t] : h.vertices()) c.in2.vertices[v] = c.graph.add_vertex(t);
  for (const auto& [id, e] : h.edges()) {
    Edge d = e;
    for (auto& v : d.sources) v = c.in2.vertices.at(v);
    for (auto& v : d.targets) v = c.in2.vertices.at(v);
    c.in2.edges[id] = c.graph.add_edge(std::move(d));
  }
  for (const auto& [x, p] : h.parents()) c.graph.set_parent(c.in2(x), ParentRef{c.in2(p.edge), p.kind});
  for (const auto& [x, b] : h.blocks()) c.graph.set_block(c.in2(x), b);
  return c;
}

EHypergraph discrete(const Word& w) {
  EHypergraph g;
  for (const auto& t : w) g.add_vertex(t);
  return g;
}

EHypergraph induced(const EHypergraph& g, const std::set<ElemRef>& keep) {
  EHypergraph out;
  out.reserve_ids(g.next_vertex_id(), g.next_edge_id());
  for (const auto& x : keep) {
    if (x.is_vertex()) {
      out.insert_vertex(x.vertex(), g.vertex_type(x.vertex()));
    } else {
      const Edge& e = g.edge(x.edge());
      for (const auto* side : {&e.sources, &e.targets})
        for (auto v : *side) out.insert_vertex(v, g.vertex_type(v));
      out.insert_edge(x.edge(), e);
    }
  }
  auto copy_meta = [&](ElemRef x) {
    if (auto p = g.parent(x); p && out.has_edge(p->edge)) {
      out.set_parent(x, p);
      out.set_block(x, g.block(x));
    }
  };
  for (const auto& [v, t] : out.vertices()) copy_meta(ElemRef::of(v));
  for (const auto& [e, d] : out.edges()) copy_meta(ElemRef::of(e));
  return out;
}

std::set<ElemRef> descendants(const EHypergraph& g, EdgeId e) {
  std::set<ElemRef> out;
  std::vector<EdgeId> todo{e};
  while (!todo.empty()) {
    EdgeId cur = todo.back();
    todo.pop_back();
    for (auto x : g.children(cur))
      if (out.insert(x).second && x.is_edge()) todo.push_back(x.edge());
  }
  return out;
}

}  // namespace egb
