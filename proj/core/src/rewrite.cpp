#include "egb/rewrite.hpp"

#include <algorithm>
#include <deque>

#include "egb/embed.hpp"

namespace egb {

std::string to_string(ComplementCase c) { return c == ComplementCase::TopLevel ? "top-level" : "nested"; }

std::vector<Violation> check_rule(const RewriteRule& r) {
  std::vector<Violation> out;
  auto side = [&](const char* which, const ExtendedCospan& c) {
    for (auto v : validate(c.carrier)) out.push_back({std::string(which) + ":" + v.element, v.clause, v.message});
    for (auto v : is_mda(c)) out.push_back({std::string(which) + ":" + v.element, v.clause, v.message});
    for (auto v : is_well_typed(c)) out.push_back({std::string(which) + ":" + v.element, v.clause, v.message});
  };
  side("lhs", r.lhs);
  side("rhs", r.rhs);
  if (r.lhs.external_input_word() != r.rhs.external_input_word())
    out.push_back({r.name, "rule", "external input words differ: " + to_string(r.lhs.external_input_word()) +
                                       " vs " + to_string(r.rhs.external_input_word())});
  if (r.lhs.external_output_word() != r.rhs.external_output_word())
    out.push_back({r.name, "rule", "external output words differ: " + to_string(r.lhs.external_output_word()) +
                                       " vs " + to_string(r.rhs.external_output_word())});
  return out;
}

bool is_convex(const EHypergraph& g, const std::set<VertexId>& vs, const std::set<EdgeId>& es) {
  auto inc = incidence(g);
  auto reach = [&](bool forward) {
    std::set<EdgeId> seen_e;
    std::set<VertexId> seen_v(vs.begin(), vs.end());
    std::deque<VertexId> queue(vs.begin(), vs.end());
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      const auto& next = forward ? inc.consumers : inc.producers;
      auto it = next.find(v);
      if (it == next.end()) continue;
      for (EdgeId e : it->second) {
        if (!seen_e.insert(e).second) continue;
        const auto& edge = g.edge(e);
        for (VertexId w : forward ? edge.targets : edge.sources)
          if (seen_v.insert(w).second) queue.push_back(w);
      }
    }
    return seen_e;
  };
  auto fwd = reach(true);
  auto bwd = reach(false);
  for (EdgeId e : fwd)
    if (bwd.count(e) && !es.count(e)) return false;
  return true;
}

bool is_down_closed(const EHypergraph& pattern, const EHypergraph& g, const Homomorphism& m) {
  for (const auto& [e, edge] : pattern.edges()) {
    if (edge.kind == EdgeKind::Plain) continue;
    if (pattern.children(e).size() != g.children(m(e)).size()) return false;
  }
  return true;
}

namespace {

std::set<VertexId> vertex_image(const Homomorphism& m) {
  std::set<VertexId> s;
  for (const auto& [a, b] : m.vertices) s.insert(b);
  return s;
}

std::set<EdgeId> edge_image(const Homomorphism& m) {
  std::set<EdgeId> s;
  for (const auto& [a, b] : m.edges) s.insert(b);
  return s;
}

// Shared predecessors, and a shared block when the common parent is an e-box.
bool cohabit(const EHypergraph& g, const std::vector<VertexId>& vs) {
  if (vs.empty()) return true;
  auto first = predecessors(g, ElemRef::of(vs.front()));
  auto block = g.block(ElemRef::of(vs.front()));
  for (VertexId v : vs) {
    if (predecessors(g, ElemRef::of(v)) != first) return false;
    if (!first.empty() && first.front().kind == ParentKind::EParent && g.block(ElemRef::of(v)) != block)
      return false;
  }
  return true;
}

ComplementResult fail(int clause, std::string reason) {
  ComplementResult r;
  r.failed_clause = clause;
  r.reason = std::move(reason);
  return r;
}

std::vector<VertexId> map_all(const Homomorphism& m, const std::vector<VertexId>& vs) {
  std::vector<VertexId> out;
  out.reserve(vs.size());
  for (VertexId v : vs) out.push_back(m(v));
  return out;
}

}  // namespace

std::vector<Match> find_convex_matches(const ExtendedCospan& lhs, const ExtendedCospan& g) {
  std::vector<Match> out;
  for_each_embedding(lhs.carrier, g.carrier, EmbedOptions{}, [&](const Homomorphism& h) {
    if (is_down_closed(lhs.carrier, g.carrier, h) && is_convex(g.carrier, vertex_image(h), edge_image(h)))
      out.push_back(Match{h});
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Match> find_convex_matches(const RewriteRule& rule, const ExtendedCospan& g) {
  return find_convex_matches(rule.lhs, g);
}

ComplementResult boundary_complement(const RewriteRule& rule, const ExtendedCospan& g, const Match& match) {
  const auto& L = rule.lhs;
  const auto& m = match.embedding;
  if (m.vertices.size() != L.carrier.vertices().size() || m.edges.size() != L.carrier.edges().size())
    return fail(1, "match is not total");
  if (!is_injective(m) || !is_homomorphism(m, L.carrier, g.carrier)) return fail(1, "match is not a mono");
  auto img_v = vertex_image(m);
  auto img_e = edge_image(m);
  if (!is_down_closed(L.carrier, g.carrier, m)) return fail(1, "image is not down-closed");
  if (!is_convex(g.carrier, img_v, img_e)) return fail(1, "image is not convex");

  auto li = L.inputs.external_vertices();
  auto lj = L.outputs.external_vertices();
  auto mi = map_all(m, li);
  auto mj = map_all(m, lj);
  std::set<VertexId> kept(mi.begin(), mi.end());
  kept.insert(mj.begin(), mj.end());

  std::vector<VertexId> feet(kept.begin(), kept.end());
  if (!cohabit(g.carrier, feet)) return fail(3, "interface images do not cohabit");
  ComplementCase kind = ComplementCase::TopLevel;
  if (!feet.empty() && !is_top_level(g.carrier, ElemRef::of(feet.front()))) kind = ComplementCase::Nested;

  // The external interface of G survives and the images of the rule's
  // strictly internal interfaces are internal interface vertices of G.
  auto lsi = map_all(m, L.inputs.strictly_internal());
  auto lsj = map_all(m, L.outputs.strictly_internal());
  std::set<VertexId> lsi_set(lsi.begin(), lsi.end()), lsj_set(lsj.begin(), lsj.end());
  for (VertexId v : g.inputs.external_vertices())
    if (img_v.count(v) && !kept.count(v)) return fail(5, "external input " + to_string(v) + " would be deleted");
  for (VertexId v : g.outputs.external_vertices())
    if (img_v.count(v) && !kept.count(v)) return fail(5, "external output " + to_string(v) + " would be deleted");
  std::set<VertexId> g_in(g.inputs.internal.begin(), g.inputs.internal.end());
  std::set<VertexId> g_out(g.outputs.internal.begin(), g.outputs.internal.end());
  for (VertexId v : lsi)
    if (!g_in.count(v)) return fail(5, "internal input image " + to_string(v) + " is not an input of the graph");
  for (VertexId v : lsj)
    if (!g_out.count(v)) return fail(5, "internal output image " + to_string(v) + " is not an output of the graph");
  for (VertexId v : g.inputs.internal)
    if (img_v.count(v) && !kept.count(v) && !lsi_set.count(v))
      return fail(5, "input " + to_string(v) + " would be deleted");
  for (VertexId v : g.outputs.internal)
    if (img_v.count(v) && !kept.count(v) && !lsj_set.count(v))
      return fail(5, "output " + to_string(v) + " would be deleted");

  BoundaryComplement bc;
  bc.kind = kind;
  auto& C = bc.cospan.carrier;
  C = g.carrier;
  for (EdgeId e : img_e) C.remove_edge(e);
  for (VertexId v : img_v)
    if (!kept.count(v)) C.remove_vertex(v);

  // A vertex that is both a rule input and a rule output is split in two.
  std::set<VertexId> mi_set(mi.begin(), mi.end());
  std::map<VertexId, VertexId> split;
  for (VertexId w : mj) {
    if (!mi_set.count(w)) continue;
    VertexId wj = C.add_vertex(C.vertex_type(w));
    C.set_parent(ElemRef::of(wj), C.parent(w));
    C.set_block(ElemRef::of(wj), C.block(ElemRef::of(w)));
    for (auto& [id, edge] : g.carrier.edges()) {
      if (!C.has_edge(id)) continue;
      for (auto& s : C.edge_mut(id).sources)
        if (s == w) s = wj;
    }
    split[w] = wj;
  }
  bc.c1 = mi;
  bc.c2 = mj;
  for (auto& v : bc.c2)
    if (split.count(v)) v = split.at(v);

  std::vector<std::size_t> in_pos(g.inputs.internal.size(), SIZE_MAX);
  for (std::size_t k = 0; k < g.inputs.internal.size(); ++k) {
    VertexId v = g.inputs.internal[k];
    if (lsi_set.count(v)) continue;
    in_pos[k] = bc.cospan.inputs.internal.size();
    bc.cospan.inputs.internal.push_back(v);
  }
  std::vector<std::size_t> out_pos(g.outputs.internal.size(), SIZE_MAX);
  for (std::size_t k = 0; k < g.outputs.internal.size(); ++k) {
    VertexId v = g.outputs.internal[k];
    if (lsj_set.count(v)) continue;
    out_pos[k] = bc.cospan.outputs.internal.size();
    bc.cospan.outputs.internal.push_back(split.count(v) ? split.at(v) : v);
  }
  bc.inputs_from_g = bc.cospan.inputs.internal.size();
  bc.outputs_from_g = bc.cospan.outputs.internal.size();
  for (std::size_t p : g.inputs.external) bc.g_input_external.push_back(in_pos[p]);
  for (std::size_t p : g.outputs.external) bc.g_output_external.push_back(out_pos[p]);
  bc.cospan.inputs.internal.insert(bc.cospan.inputs.internal.end(), bc.c2.begin(), bc.c2.end());
  bc.cospan.outputs.internal.insert(bc.cospan.outputs.internal.end(), bc.c1.begin(), bc.c1.end());
  bc.cospan.inputs.external = bc.g_input_external;
  bc.cospan.outputs.external = bc.g_output_external;
  if (kind == ComplementCase::TopLevel) {
    for (std::size_t k = 0; k < bc.c2.size(); ++k) bc.cospan.inputs.external.push_back(bc.inputs_from_g + k);
    for (std::size_t k = 0; k < bc.c1.size(); ++k) bc.cospan.outputs.external.push_back(bc.outputs_from_g + k);
  }

  std::set<VertexId> all_feet(bc.c1.begin(), bc.c1.end());
  all_feet.insert(bc.c2.begin(), bc.c2.end());
  if (all_feet.size() != bc.c1.size() + bc.c2.size()) return fail(2, "interface maps are not mono");
  if (!cohabit(C, std::vector<VertexId>(all_feet.begin(), all_feet.end())))
    return fail(4, "interface images do not cohabit in the complement");

  int clause = kind == ComplementCase::TopLevel ? 6 : 7;
  if (auto vs = is_mda(bc.cospan); !vs.empty()) return fail(clause, "complement is not mda: " + to_string(vs.front()));
  if (kind == ComplementCase::TopLevel)
    if (auto vs = is_well_typed(bc.cospan); !vs.empty())
      return fail(clause, "complement is not well-typed: " + to_string(vs.front()));

  ComplementResult r;
  r.value = std::move(bc);
  return r;
}

RewriteOutcome apply_rewrite(const ExtendedCospan& g, const RewriteRule& rule, const Match& m) {
  RewriteOutcome out;
  auto cr = boundary_complement(rule, g, m);
  if (!cr.value) {
    out.failed_clause = cr.failed_clause;
    out.reason = cr.reason;
    return out;
  }
  const auto& bc = *cr.value;
  out.kind = bc.kind;
  const auto& R = rule.rhs;
  if (R.external_input_word() != rule.lhs.external_input_word() ||
      R.external_output_word() != rule.lhs.external_output_word()) {
    out.failed_clause = -1;
    out.reason = "rule sides have different external words";
    return out;
  }
  auto ri = R.inputs.external_vertices();
  auto rj = R.outputs.external_vertices();
  Word zw;
  for (VertexId v : bc.c1) zw.push_back(bc.cospan.carrier.vertex_type(v));
  for (VertexId v : bc.c2) zw.push_back(bc.cospan.carrier.vertex_type(v));
  EHypergraph z = discrete(zw);
  Homomorphism f, h;
  for (std::size_t k = 0; k < bc.c1.size(); ++k) {
    f.vertices[VertexId{static_cast<std::uint32_t>(k)}] = bc.c1[k];
    h.vertices[VertexId{static_cast<std::uint32_t>(k)}] = ri[k];
  }
  for (std::size_t k = 0; k < bc.c2.size(); ++k) {
    VertexId zk{static_cast<std::uint32_t>(bc.c1.size() + k)};
    f.vertices[zk] = bc.c2[k];
    h.vertices[zk] = rj[k];
  }
  Pushout po;
  try {
    po = pushout(z, f, bc.cospan.carrier, h, R.carrier);
  } catch (const PushoutError& e) {
    out.failed_clause = -2;
    out.reason = e.what();
    return out;
  }
  ExtendedCospan res;
  res.carrier = std::move(po.graph);
  for (std::size_t k = 0; k < bc.inputs_from_g; ++k)
    res.inputs.internal.push_back(po.from_x(bc.cospan.inputs.internal[k]));
  for (VertexId v : R.inputs.strictly_internal()) res.inputs.internal.push_back(po.from_y(v));
  for (std::size_t k = 0; k < bc.outputs_from_g; ++k)
    res.outputs.internal.push_back(po.from_x(bc.cospan.outputs.internal[k]));
  for (VertexId v : R.outputs.strictly_internal()) res.outputs.internal.push_back(po.from_y(v));
  res.inputs.external = bc.g_input_external;
  res.outputs.external = bc.g_output_external;
  out.result = std::move(res);
  return out;
}

}  // namespace egb
