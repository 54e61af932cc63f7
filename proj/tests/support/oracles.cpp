#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace egb::testing {

namespace {

ElemRef image(const Homomorphism& h, ElemRef x) {
  if (x.is_vertex()) return ElemRef::of(h.vertices.at(x.vertex()));
  return ElemRef::of(h.edges.at(x.edge()));
}

std::vector<ElemRef> elements(const EHypergraph& g) {
  std::vector<ElemRef> out;
  for (const auto& [v, t] : g.vertices()) out.push_back(ElemRef::of(v));
  for (const auto& [e, d] : g.edges()) out.push_back(ElemRef::of(e));
  return out;
}

bool same_block(const EHypergraph& g, ElemRef a, ElemRef b) {
  if (a == b) return true;
  auto pa = g.parent(a), pb = g.parent(b);
  if (!pa || !pb || pa->kind != ParentKind::EParent || *pa != *pb) return false;
  return g.block(a) == g.block(b);
}

}  // namespace

bool check_hom(const Homomorphism& h, const EHypergraph& f, const EHypergraph& g) {
  for (const auto& [v, t] : f.vertices()) {
    auto it = h.vertices.find(v);
    if (it == h.vertices.end() || !g.has_vertex(it->second) || !(g.vertex_type(it->second) == t)) return false;
  }
  for (const auto& [id, e] : f.edges()) {
    auto it = h.edges.find(id);
    if (it == h.edges.end() || !g.has_edge(it->second)) return false;
    const Edge& d = g.edge(it->second);
    if (d.kind != e.kind) return false;
    if (e.kind == EdgeKind::Plain && !(d.op == e.op)) return false;
    if (d.sources.size() != e.sources.size() || d.targets.size() != e.targets.size()) return false;
    for (std::size_t i = 0; i < e.sources.size(); ++i)
      if (h.vertices.at(e.sources[i]) != d.sources[i]) return false;
    for (std::size_t i = 0; i < e.targets.size(); ++i)
      if (h.vertices.at(e.targets[i]) != d.targets[i]) return false;
  }
  auto all = elements(f);
  for (auto x : all) {
    auto p = f.parent(x);
    if (!p) continue;
    auto q = g.parent(image(h, x));
    if (!q || q->kind != p->kind || q->edge != h.edges.at(p->edge)) return false;
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (same_block(f, all[i], all[j]) && !same_block(g, image(h, all[i]), image(h, all[j]))) return false;
  return true;
}

std::vector<Homomorphism> all_homs(const EHypergraph& f, const EHypergraph& g, const Homomorphism& fixed,
                                   std::size_t limit) {
  std::vector<Homomorphism> out;
  std::vector<EdgeId> fe;
  for (const auto& [e, d] : f.edges()) fe.push_back(e);
  std::vector<VertexId> fv;
  for (const auto& [v, t] : f.vertices()) fv.push_back(v);
  Homomorphism cur;
  cur.vertices = fixed.vertices;

  std::function<void(std::size_t)> vertices = [&](std::size_t i) {
    if (out.size() >= limit) return;
    if (i == fv.size()) {
      if (check_hom(cur, f, g)) out.push_back(cur);
      return;
    }
    VertexId v = fv[i];
    if (cur.vertices.count(v)) return vertices(i + 1);
    for (const auto& [w, t] : g.vertices()) {
      if (!(t == f.vertex_type(v))) continue;
      cur.vertices[v] = w;
      vertices(i + 1);
      cur.vertices.erase(v);
    }
  };

  std::function<void(std::size_t)> edges = [&](std::size_t i) {
    if (out.size() >= limit) return;
    if (i == fe.size()) return vertices(0);
    const Edge& e = f.edge(fe[i]);
    auto candidates = [&] {
      std::vector<EdgeId> cs;
      if (auto it = fixed.edges.find(fe[i]); it != fixed.edges.end()) return std::vector<EdgeId>{it->second};
      for (const auto& [id, d] : g.edges()) cs.push_back(id);
      return cs;
    }();
    for (EdgeId c : candidates) {
      if (!g.has_edge(c)) continue;
      const Edge& d = g.edge(c);
      if (d.kind != e.kind || d.sources.size() != e.sources.size() || d.targets.size() != e.targets.size()) continue;
      if (e.kind == EdgeKind::Plain && !(d.op == e.op)) continue;
      std::vector<VertexId> bound;
      bool ok = true;
      auto bind = [&](VertexId a, VertexId b) {
        auto it = cur.vertices.find(a);
        if (it != cur.vertices.end()) return it->second == b;
        if (!(f.vertex_type(a) == g.vertex_type(b))) return false;
        cur.vertices[a] = b;
        bound.push_back(a);
        return true;
      };
      for (std::size_t k = 0; ok && k < e.sources.size(); ++k) ok = bind(e.sources[k], d.sources[k]);
      for (std::size_t k = 0; ok && k < e.targets.size(); ++k) ok = bind(e.targets[k], d.targets[k]);
      if (ok) {
        cur.edges[fe[i]] = c;
        edges(i + 1);
        cur.edges.erase(fe[i]);
      }
      for (auto a : bound) cur.vertices.erase(a);
    }
  };
  edges(0);
  return out;
}

namespace {

using GroupKey = std::tuple<int, std::uint32_t, std::uint32_t>;

GroupKey group_key(const EHypergraph& g, VertexId v) {
  auto p = g.parent(v);
  if (!p) return {0, 0, 0};
  if (p->kind == ParentKind::LamParent) return {1, p->edge.value, 0};
  return {2, p->edge.value, *g.block(v)};
}

bool interface_ok(const EHypergraph& ga, const Interface& a, const Interface& b, const Homomorphism& h) {
  if (a.internal.size() != b.internal.size() || a.external.size() != b.external.size()) return false;
  std::map<VertexId, std::size_t> where;
  for (std::size_t j = 0; j < b.internal.size(); ++j) where[b.internal[j]] = j;
  std::vector<std::size_t> pos;
  for (auto v : a.internal) {
    auto it = where.find(h.vertices.at(v));
    if (it == where.end()) return false;
    pos.push_back(it->second);
  }
  for (std::size_t k = 0; k < a.external.size(); ++k)
    if (pos[a.external[k]] != b.external[k]) return false;
  std::map<GroupKey, std::size_t> last;
  for (std::size_t i = 0; i < a.internal.size(); ++i) {
    if (!ga.parent(a.internal[i])) continue;
    auto k = group_key(ga, a.internal[i]);
    auto it = last.find(k);
    if (it != last.end() && it->second > pos[i]) return false;
    last[k] = pos[i];
  }
  return true;
}

}  // namespace

bool brute_cospan_iso(const ExtendedCospan& a, const ExtendedCospan& b) {
  const auto& ga = a.carrier;
  const auto& gb = b.carrier;
  if (ga.vertices().size() != gb.vertices().size() || ga.edges().size() != gb.edges().size()) return false;
  if (a.inputs.external.size() != b.inputs.external.size() || a.outputs.external.size() != b.outputs.external.size())
    return false;
  Homomorphism pins;
  auto pin = [&](const Interface& x, const Interface& y) {
    for (std::size_t k = 0; k < x.external.size(); ++k) {
      VertexId s = x.internal[x.external[k]], t = y.internal[y.external[k]];
      auto [it, fresh] = pins.vertices.emplace(s, t);
      if (!fresh && it->second != t) return false;
    }
    return true;
  };
  if (!pin(a.inputs, b.inputs) || !pin(a.outputs, b.outputs)) return false;
  for (const auto& h : all_homs(ga, gb, pins)) {
    std::set<VertexId> vs;
    std::set<EdgeId> es;
    for (const auto& [x, y] : h.vertices) vs.insert(y);
    for (const auto& [x, y] : h.edges) es.insert(y);
    if (vs.size() != gb.vertices().size() || es.size() != gb.edges().size()) continue;
    Homomorphism inv;
    for (const auto& [x, y] : h.vertices) inv.vertices[y] = x;
    for (const auto& [x, y] : h.edges) inv.edges[y] = x;
    if (!check_hom(inv, gb, ga)) continue;
    if (interface_ok(ga, a.inputs, b.inputs, h) && interface_ok(ga, a.outputs, b.outputs, h)) return true;
  }
  return false;
}

void Audit::carrier(const std::string& what, const EHypergraph& g) {
  ++graphs;
  auto vs = validate(g);
  violations += vs.size();
  for (const auto& v : vs)
    if (log.size() < 50) log.push_back(what + ": " + to_string(v));
}

void Audit::cospan(const std::string& what, const ExtendedCospan& c, bool mda, bool typed) {
  ++graphs;
  auto vs = validate(c.carrier);
  for (auto& v : mda ? is_mda(c) : check_interfaces(c)) vs.push_back(v);
  if (typed)
    for (auto& v : is_well_typed(c)) vs.push_back(v);
  violations += vs.size();
  for (const auto& v : vs)
    if (log.size() < 50) log.push_back(what + ": " + to_string(v));
}

Audit& audit() {
  static Audit a;
  return a;
}

namespace {

std::size_t below(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

EHypergraph random_graph(std::mt19937& rng, std::size_t max_elements) {
  const VertexType ta = VertexType::base("A"), tb = VertexType::base("B");
  for (;;) {
    EHypergraph g;
    std::vector<VertexId> vs;
    std::size_t nv = 1 + below(rng, 3);
    for (std::size_t i = 0; i < nv; ++i) vs.push_back(g.add_vertex(below(rng, 3) == 0 ? tb : ta));
    auto pick_ends = [&] {
      std::vector<VertexId> ends;
      std::size_t n = below(rng, 3);
      for (std::size_t i = 0; i < n; ++i) ends.push_back(vs[below(rng, vs.size())]);
      return ends;
    };
    auto labels = [&](const std::vector<VertexId>& ends) {
      Word w;
      for (auto v : ends) w.push_back(g.vertex_type(v));
      return w;
    };
    std::vector<EdgeId> plain;
    std::size_t ne = below(rng, 3);
    for (std::size_t i = 0; i < ne; ++i) {
      auto s = pick_ends(), t = pick_ends();
      plain.push_back(g.add_plain(OpSymbol{"p", labels(s), labels(t)}, s, t));
    }
    if (below(rng, 2) == 0) {
      EdgeKind kind = below(rng, 2) == 0 ? EdgeKind::EBox : EdgeKind::LambdaBox;
      auto s = pick_ends(), t = pick_ends();
      EdgeId box = g.add_box(kind, s, t);
      ParentRef p{box, kind == EdgeKind::EBox ? ParentKind::EParent : ParentKind::LamParent};
      for (auto v : vs) {
        if (below(rng, 2) != 0) continue;
        g.set_parent(ElemRef::of(v), p);
        if (kind == EdgeKind::EBox) g.set_block(ElemRef::of(v), static_cast<BlockId>(below(rng, 2)));
      }
      for (auto e : plain) {
        const Edge& d = g.edge(e);
        if (d.sources.empty() && d.targets.empty()) continue;
        VertexId first = d.sources.empty() ? d.targets[0] : d.sources[0];
        auto q = g.parent(first);
        if (!q) continue;
        g.set_parent(ElemRef::of(e), q);
        g.set_block(ElemRef::of(e), g.block(first));
      }
    }
    if (g.element_count() <= max_elements && validate(g).empty()) return g;
  }
}

}  // namespace

Span random_span(std::mt19937& rng, std::size_t max_elements) {
  for (;;) {
    Span s;
    s.x = random_graph(rng, max_elements);
    s.y = random_graph(rng, max_elements);
    std::size_t k = below(rng, 3);
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      std::vector<VertexId> xs, ys;
      for (const auto& [v, t] : s.x.vertices()) xs.push_back(v);
      VertexId a = xs[below(rng, xs.size())];
      for (const auto& [v, t] : s.y.vertices())
        if (t == s.x.vertex_type(a)) ys.push_back(v);
      if (ys.empty()) {
        ok = false;
        break;
      }
      VertexId zv = s.z.add_vertex(s.x.vertex_type(a));
      s.f.vertices[zv] = a;
      s.g.vertices[zv] = ys[below(rng, ys.size())];
    }
    if (!ok) continue;
    try {
      auto po = pushout(s.z, s.f, s.x, s.g, s.y);
      if (validate(po.graph).empty()) return s;
    } catch (const std::exception&) {
    }
  }
}

namespace {

struct End {
  EdgeId edge;
  bool source;
  std::size_t index;
};

bool top_level(const EHypergraph& g, VertexId v) { return !g.parent(v); }

std::vector<VertexId> concat_ids(std::vector<VertexId> a, const std::vector<VertexId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Interface with_externals(const EHypergraph& g, std::vector<VertexId> internal) {
  Interface i;
  i.internal = std::move(internal);
  for (std::size_t k = 0; k < i.internal.size(); ++k)
    if (top_level(g, i.internal[k])) i.external.push_back(k);
  return i;
}

void for_each_order(const EHypergraph& g, const std::vector<VertexId>& list, std::size_t cap, bool& capped,
                    const std::function<void(const std::vector<VertexId>&)>& visit) {
  std::map<GroupKey, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < list.size(); ++i) by_group[group_key(g, list[i])].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [k, ps] : by_group) {
    if (ps.size() > cap) {
      capped = true;
      continue;
    }
    groups.push_back(ps);
  }
  std::vector<VertexId> cur = list;
  std::function<void(std::size_t)> go = [&](std::size_t gi) {
    if (gi == groups.size()) return visit(cur);
    const auto& ps = groups[gi];
    std::vector<VertexId> vals;
    for (auto p : ps) vals.push_back(list[p]);
    std::sort(vals.begin(), vals.end());
    do {
      for (std::size_t k = 0; k < ps.size(); ++k) cur[ps[k]] = vals[k];
      go(gi + 1);
    } while (std::next_permutation(vals.begin(), vals.end()));
    for (auto p : ps) cur[p] = list[p];
  };
  go(0);
}

}  // namespace

ComplementSearch search_complements(const RewriteRule& rule, const ExtendedCospan& g, const Match& m,
                                    const std::optional<ExtendedCospan>& constructed, std::size_t permutation_cap) {
  ComplementSearch out;
  const auto& L = rule.lhs;
  const auto& h = m.embedding;
  auto li = L.inputs.external_vertices(), lo = L.outputs.external_vertices();
  auto lsi = L.inputs.strictly_internal(), lso = L.outputs.strictly_internal();

  std::set<VertexId> feet;
  for (auto v : li) feet.insert(h(v));
  for (auto v : lo) feet.insert(h(v));
  bool top = false;
  for (const auto& [v, t] : L.carrier.vertices()) top = top || top_level(g.carrier, h(v));

  EHypergraph d0 = g.carrier;
  for (const auto& [e, d] : L.carrier.edges()) d0.remove_edge(h(e));
  for (const auto& [v, t] : L.carrier.vertices())
    if (!feet.count(h(v))) d0.remove_vertex(h(v));

  std::set<VertexId> drop_in, drop_out;
  for (auto v : lsi) drop_in.insert(h(v));
  for (auto v : lso) drop_out.insert(h(v));
  std::vector<VertexId> gin, gout;
  for (auto v : g.inputs.internal)
    if (!drop_in.count(v)) gin.push_back(v);
  for (auto v : g.outputs.internal)
    if (!drop_out.count(v)) gout.push_back(v);
  out.matches_constructed = !constructed;
  for (auto v : gin)
    if (!d0.has_vertex(v)) return out;
  for (auto v : gout)
    if (!d0.has_vertex(v)) return out;

  std::vector<VertexId> foot_list(feet.begin(), feet.end());
  std::map<VertexId, std::vector<End>> ends;
  for (const auto& [id, e] : d0.edges()) {
    for (std::size_t k = 0; k < e.sources.size(); ++k)
      if (feet.count(e.sources[k])) ends[e.sources[k]].push_back({id, true, k});
    for (std::size_t k = 0; k < e.targets.size(); ++k)
      if (feet.count(e.targets[k])) ends[e.targets[k]].push_back({id, false, k});
  }

  Word boundary;
  for (auto v : li) boundary.push_back(L.carrier.vertex_type(v));
  for (auto v : lo) boundary.push_back(L.carrier.vertex_type(v));
  EHypergraph z = discrete(boundary);

  std::vector<ExtendedCospan> reps;
  auto consider = [&](const ExtendedCospan& c, const std::vector<VertexId>& c1, const std::vector<VertexId>& c2) {
    ++out.candidates;
    Homomorphism f, gl;
    for (std::size_t k = 0; k < li.size(); ++k) {
      f.vertices[VertexId{static_cast<std::uint32_t>(k)}] = c1[k];
      gl.vertices[VertexId{static_cast<std::uint32_t>(k)}] = li[k];
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
      f.vertices[VertexId{static_cast<std::uint32_t>(li.size() + k)}] = c2[k];
      gl.vertices[VertexId{static_cast<std::uint32_t>(li.size() + k)}] = lo[k];
    }
    ExtendedCospan back;
    try {
      auto po = pushout(z, f, c.carrier, gl, L.carrier);
      back.carrier = po.graph;
      std::vector<VertexId> in, outs;
      for (std::size_t k = 0; k < c.inputs.internal.size() - c2.size(); ++k)
        in.push_back(po.from_x(c.inputs.internal[k]));
      for (auto v : lsi) in.push_back(po.from_y(v));
      for (std::size_t k = 0; k < c.outputs.internal.size() - c1.size(); ++k)
        outs.push_back(po.from_x(c.outputs.internal[k]));
      for (auto v : lso) outs.push_back(po.from_y(v));
      back.inputs = with_externals(back.carrier, in);
      back.outputs = with_externals(back.carrier, outs);
    } catch (const std::exception&) {
      return;
    }
    if (!find_cospan_iso(back, g)) return;
    ++out.valid;
    for (const auto& r : reps)
      if (find_cospan_iso(r, c)) return;
    reps.push_back(c);
  };

  // choose split variants foot by foot
  EHypergraph work = d0;
  std::map<VertexId, VertexId> copy;  // foot -> second copy
  std::function<void(std::size_t)> split = [&](std::size_t fi) {
    if (fi < foot_list.size()) {
      VertexId w = foot_list[fi];
      split(fi + 1);
      const auto& es = ends[w];
      for (std::size_t mask = 0; mask < (std::size_t{1} << es.size()); ++mask) {
        EHypergraph saved = work;
        VertexId w2 = work.add_vertex(work.vertex_type(w));
        work.set_parent(ElemRef::of(w2), work.parent(w));
        work.set_block(ElemRef::of(w2), work.block(w));
        for (std::size_t k = 0; k < es.size(); ++k) {
          if (!(mask >> k & 1)) continue;
          Edge& e = work.edge_mut(es[k].edge);
          (es[k].source ? e.sources : e.targets)[es[k].index] = w2;
        }
        copy[w] = w2;
        split(fi + 1);
        copy.erase(w);
        work = std::move(saved);
      }
      return;
    }
    // copy choices for every occurrence of a split foot
    std::vector<VertexId*> slots;
    std::vector<VertexId> c1, c2, in = gin, outs = gout;
    for (auto v : li) c1.push_back(h(v));
    for (auto v : lo) c2.push_back(h(v));
    for (auto* list : {&c1, &c2, &in, &outs})
      for (auto& v : *list)
        if (copy.count(v)) slots.push_back(&v);
    std::vector<VertexId> base;
    for (auto* s : slots) base.push_back(*s);
    for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
      for (std::size_t k = 0; k < slots.size(); ++k) *slots[k] = (mask >> k & 1) ? copy.at(base[k]) : base[k];
      ExtendedCospan c;
      c.carrier = work;
      c.inputs = with_externals(work, concat_ids(in, c2));
      c.outputs = with_externals(work, concat_ids(outs, c1));
      if (!validate(work).empty() || !is_mda(c).empty() || (top && !is_well_typed(c).empty())) {
        ++out.candidates;
        continue;
      }
      // reordering across interface groups gives iso cospans, so only the
      // order inside each group is enumerated
      for_each_order(work, in, permutation_cap, out.capped, [&](const std::vector<VertexId>& pin) {
        for_each_order(work, outs, permutation_cap, out.capped, [&](const std::vector<VertexId>& pout) {
          ExtendedCospan v;
          v.carrier = work;
          v.inputs = with_externals(work, concat_ids(pin, c2));
          v.outputs = with_externals(work, concat_ids(pout, c1));
          consider(v, c1, c2);
        });
      });
    }
  };
  split(0);

  out.classes = reps.size();
  if (constructed)
    out.matches_constructed = reps.size() == 1 && find_cospan_iso(reps.front(), *constructed).has_value();
  else
    out.matches_constructed = reps.empty();
  return out;
}

}  // namespace egb::testing
