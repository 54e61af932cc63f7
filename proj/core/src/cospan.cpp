#include "egb/cospan.hpp"

#include <algorithm>

#include "egb/embed.hpp"

namespace egb {

std::vector<VertexId> Interface::external_vertices() const {
  std::vector<VertexId> out;
  for (auto p : external) out.push_back(internal.at(p));
  return out;
}

std::vector<VertexId> Interface::strictly_internal() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < internal.size(); ++i)
    if (std::find(external.begin(), external.end(), i) == external.end()) out.push_back(internal[i]);
  return out;
}

bool Interface::is_external(VertexId v) const {
  for (auto p : external)
    if (internal.at(p) == v) return true;
  return false;
}

namespace {

Word labels(const EHypergraph& g, const std::vector<VertexId>& vs) {
  Word w;
  for (auto v : vs) w.push_back(g.vertex_type(v));
  return w;
}

}  // namespace

Word ExtendedCospan::external_input_word() const { return labels(carrier, inputs.external_vertices()); }
Word ExtendedCospan::external_output_word() const { return labels(carrier, outputs.external_vertices()); }

std::vector<Violation> check_interfaces(const ExtendedCospan& c) {
  std::vector<Violation> out;
  auto side = [&](const Interface& itf, const char* name) {
    std::set<VertexId> seen;
    for (auto v : itf.internal) {
      if (!c.carrier.has_vertex(v)) {
        out.push_back({to_string(v), name, "interface vertex missing from carrier"});
        return;
      }
      if (!seen.insert(v).second) out.push_back({to_string(v), name, "internal interface map is not mono"});
    }
    std::set<std::size_t> pos;
    for (auto p : itf.external) {
      if (p >= itf.internal.size()) {
        out.push_back({std::string(name) + "#" + std::to_string(p), name, "external position out of range"});
        return;
      }
      if (!pos.insert(p).second) out.push_back({std::string(name) + "#" + std::to_string(p), name,
                                                "external interface map is not mono"});
    }
    for (std::size_t i = 0; i < itf.internal.size(); ++i) {
      VertexId v = itf.internal[i];
      bool ext = pos.count(i) != 0;
      bool top = is_top_level(c.carrier, ElemRef::of(v));
      if (ext && !top) out.push_back({to_string(v), name, "external interface vertex is nested"});
      if (!ext && top) out.push_back({to_string(v), name, "strictly internal interface vertex is top-level"});
    }
  };
  side(c.inputs, "inputs");
  side(c.outputs, "outputs");
  return out;
}

std::vector<Violation> is_mda(const ExtendedCospan& c) {
  auto out = check_interfaces(c);
  if (!out.empty()) return out;
  if (!is_directed_acyclic(c.carrier)) out.push_back({"carrier", "mda", "underlying hypergraph has a cycle"});
  auto inc = incidence(c.carrier);
  std::set<VertexId> ins(c.inputs.internal.begin(), c.inputs.internal.end());
  std::set<VertexId> outs(c.outputs.internal.begin(), c.outputs.internal.end());
  for (const auto& [v, t] : c.carrier.vertices()) {
    std::size_t din = inc.producers.count(v) ? inc.producers.at(v).size() : 0;
    std::size_t dout = inc.consumers.count(v) ? inc.consumers.at(v).size() : 0;
    // a vertex listed twice in one edge counts twice
    if (din == 1) {
      const auto& t2 = c.carrier.edge(inc.producers.at(v)[0]).targets;
      din = static_cast<std::size_t>(std::count(t2.begin(), t2.end(), v));
    }
    if (dout == 1) {
      const auto& s2 = c.carrier.edge(inc.consumers.at(v)[0]).sources;
      dout = static_cast<std::size_t>(std::count(s2.begin(), s2.end(), v));
    }
    if (din > 1) out.push_back({to_string(v), "mda", "in-degree " + std::to_string(din)});
    if (dout > 1) out.push_back({to_string(v), "mda", "out-degree " + std::to_string(dout)});
    if ((din == 0) != (ins.count(v) != 0))
      out.push_back({to_string(v), "mda", din == 0 ? "in-degree 0 but not an input" : "input with a producer"});
    if ((dout == 0) != (outs.count(v) != 0))
      out.push_back({to_string(v), "mda", dout == 0 ? "out-degree 0 but not an output" : "output with a consumer"});
  }
  return out;
}

std::vector<VertexId> box_ports(const ExtendedCospan& c, EdgeId e, Side side) {
  const Interface& itf = side == Side::In ? c.inputs : c.outputs;
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < itf.internal.size(); ++i) {
    if (std::find(itf.external.begin(), itf.external.end(), i) != itf.external.end()) continue;
    auto p = c.carrier.parent(itf.internal[i]);
    if (p && p->edge == e) out.push_back(itf.internal[i]);
  }
  return out;
}

std::vector<Violation> is_well_typed(const ExtendedCospan& c) {
  std::vector<Violation> out;
  const EHypergraph& g = c.carrier;
  for (const auto& [id, e] : g.edges()) {
    if (e.kind == EdgeKind::EBox) {
      for (auto side : {Side::In, Side::Out}) {
        auto ports = box_ports(c, id, side);
        const Word want = labels(g, side == Side::In ? e.sources : e.targets);
        for (auto b : g.block_ids(id)) {
          std::vector<VertexId> mine;
          for (auto v : ports)
            if (g.block(v) == b) mine.push_back(v);
          Word got = labels(g, mine);
          if (got != want)
            out.push_back({to_string(id), "well-typed",
                           std::string("block ") + std::to_string(b) + (side == Side::In ? " inputs " : " outputs ") +
                               to_string(got) + " expected " + to_string(want)});
        }
      }
    } else if (e.kind == EdgeKind::LambdaBox) {
      Word in = labels(g, box_ports(c, id, Side::In));
      Word outw = labels(g, box_ports(c, id, Side::Out));
      Word src = labels(g, e.sources);
      if (e.targets.size() != 1) {
        out.push_back({to_string(id), "well-typed", "lambda box must have exactly one target"});
        continue;
      }
      if (in.size() < src.size() || !std::equal(src.begin(), src.end(), in.begin())) {
        out.push_back({to_string(id), "well-typed",
                       "inputs " + to_string(in) + " do not start with the sources " + to_string(src)});
        continue;
      }
      Word bound(in.begin() + static_cast<std::ptrdiff_t>(src.size()), in.end());
      VertexType want = VertexType::arrow(fold_word(bound), fold_word(outw));
      if (!(g.vertex_type(e.targets[0]) == want))
        out.push_back({to_string(id), "well-typed",
                       "target labelled " + to_string(g.vertex_type(e.targets[0])) + " expected " + to_string(want)});
    }
  }
  return out;
}

ExtendedCospan empty_cospan() { return {}; }

ExtendedCospan identity(const Word& w) {
  ExtendedCospan c;
  for (std::size_t i = 0; i < w.size(); ++i) {
    VertexId v = c.carrier.add_vertex(w[i]);
    c.inputs.internal.push_back(v);
    c.inputs.external.push_back(i);
  }
  c.outputs = c.inputs;
  return c;
}

ExtendedCospan symmetry(const Word& a, const Word& b) {
  ExtendedCospan c;
  std::vector<VertexId> va, vb;
  for (const auto& t : a) va.push_back(c.carrier.add_vertex(t));
  for (const auto& t : b) vb.push_back(c.carrier.add_vertex(t));
  c.inputs.internal = va;
  c.inputs.internal.insert(c.inputs.internal.end(), vb.begin(), vb.end());
  c.outputs.internal = vb;
  c.outputs.internal.insert(c.outputs.internal.end(), va.begin(), va.end());
  for (std::size_t i = 0; i < a.size() + b.size(); ++i) {
    c.inputs.external.push_back(i);
    c.outputs.external.push_back(i);
  }
  return c;
}

namespace {

std::vector<VertexId> map_all(const Homomorphism& h, const std::vector<VertexId>& vs) {
  std::vector<VertexId> out;
  for (auto v : vs) out.push_back(h(v));
  return out;
}

void append(std::vector<VertexId>& a, const std::vector<VertexId>& b) { a.insert(a.end(), b.begin(), b.end()); }

}  // namespace

ExtendedCospan compose(const ExtendedCospan& c1, const ExtendedCospan& c2) {
  Word w1 = c1.external_output_word();
  Word w2 = c2.external_input_word();
  if (w1 != w2) throw TypeMismatch("compose: " + to_string(w1) + " vs " + to_string(w2));
  EHypergraph z = discrete(w1);
  Homomorphism f, g;
  auto o1 = c1.outputs.external_vertices();
  auto i2 = c2.inputs.external_vertices();
  for (std::size_t k = 0; k < w1.size(); ++k) {
    f.vertices[VertexId{static_cast<std::uint32_t>(k)}] = o1[k];
    g.vertices[VertexId{static_cast<std::uint32_t>(k)}] = i2[k];
  }
  Pushout po = [&] {
    try {
      return pushout(z, f, c1.carrier, g, c2.carrier);
    } catch (const PushoutError& e) {
      throw std::logic_error(std::string("compose: external interface is not top-level: ") + e.what());
    }
  }();
  ExtendedCospan r;
  r.carrier = std::move(po.graph);
  r.inputs.internal = map_all(po.from_x, c1.inputs.internal);
  append(r.inputs.internal, map_all(po.from_y, c2.inputs.strictly_internal()));
  r.inputs.external = c1.inputs.external;
  r.outputs.internal = map_all(po.from_y, c2.outputs.internal);
  append(r.outputs.internal, map_all(po.from_x, c1.outputs.strictly_internal()));
  r.outputs.external = c2.outputs.external;
  return r;
}

ExtendedCospan tensor(const ExtendedCospan& c1, const ExtendedCospan& c2) {
  Coproduct cp = coproduct(c1.carrier, c2.carrier);
  ExtendedCospan r;
  r.carrier = std::move(cp.graph);
  auto side = [&](const Interface& a, const Interface& b) {
    Interface out = a;
    append(out.internal, map_all(cp.in2, b.internal));
    for (auto p : b.external) out.external.push_back(p + a.internal.size());
    return out;
  };
  r.inputs = side(c1.inputs, c2.inputs);
  r.outputs = side(c1.outputs, c2.outputs);
  return r;
}

ExtendedCospan join(const ExtendedCospan& c1, const ExtendedCospan& c2) { return join_all({c1, c2}); }

ExtendedCospan join_all(const std::vector<ExtendedCospan>& cs) {
  if (cs.empty()) throw std::invalid_argument("join of no cospans");
  if (cs.size() == 1) return cs.front();
  Word win = cs.front().external_input_word();
  Word wout = cs.front().external_output_word();
  for (const auto& c : cs) {
    if (c.external_input_word() != win || c.external_output_word() != wout)
      throw TypeMismatch("join: operand types differ");
    if (c.carrier.element_count() == 0) throw std::invalid_argument("join: operand with an empty carrier");
  }
  ExtendedCospan r;
  std::vector<VertexId> src, tgt;
  for (const auto& t : win) src.push_back(r.carrier.add_vertex(t));
  for (const auto& t : wout) tgt.push_back(r.carrier.add_vertex(t));
  EdgeId box = r.carrier.add_box(EdgeKind::EBox, src, tgt);
  r.inputs.internal = src;
  r.outputs.internal = tgt;
  for (std::size_t i = 0; i < src.size(); ++i) r.inputs.external.push_back(i);
  for (std::size_t i = 0; i < tgt.size(); ++i) r.outputs.external.push_back(i);
  BlockId block = 0;
  for (const auto& c : cs) {
    Coproduct cp = coproduct(r.carrier, c.carrier);
    r.carrier = std::move(cp.graph);
    for (const auto& [v, t] : c.carrier.vertices())
      if (!c.carrier.parent(v)) {
        r.carrier.set_parent(ElemRef::of(cp.in2(v)), ParentRef{box, ParentKind::EParent});
        r.carrier.set_block(ElemRef::of(cp.in2(v)), block);
      }
    for (const auto& [id, e] : c.carrier.edges())
      if (!c.carrier.parent(id)) {
        r.carrier.set_parent(ElemRef::of(cp.in2(id)), ParentRef{box, ParentKind::EParent});
        r.carrier.set_block(ElemRef::of(cp.in2(id)), block);
      }
    append(r.inputs.internal, map_all(cp.in2, c.inputs.internal));
    append(r.outputs.internal, map_all(cp.in2, c.outputs.internal));
    ++block;
  }
  return r;
}

std::vector<std::vector<std::size_t>> interface_partition(const ExtendedCospan& c, Side side) {
  const auto& vs = side == Side::In ? c.inputs.internal : c.outputs.internal;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> group;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto p = c.carrier.parent(vs[i]);
    std::pair<std::int64_t, std::int64_t> k{-1 - static_cast<std::int64_t>(i), 0};
    if (p && p->kind == ParentKind::EParent)
      k = {p->edge.value, 1 + static_cast<std::int64_t>(*c.carrier.block(ElemRef::of(vs[i])))};
    else if (p)
      k = {p->edge.value, 0};
    auto [it, fresh] = group.emplace(k, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

namespace {

std::optional<std::vector<std::size_t>> position_map(const Homomorphism& h, const std::vector<VertexId>& a,
                                                     const std::vector<VertexId>& b) {
  std::map<VertexId, std::size_t> where;
  for (std::size_t i = 0; i < b.size(); ++i) where[b[i]] = i;
  std::vector<std::size_t> out;
  for (auto v : a) {
    auto it = where.find(h(v));
    if (it == where.end()) return std::nullopt;
    out.push_back(it->second);
  }
  return out;
}

bool order_preserved(const std::vector<std::vector<std::size_t>>& blocks, const std::vector<std::size_t>& beta) {
  for (const auto& b : blocks)
    for (std::size_t i = 1; i < b.size(); ++i)
      if (beta[b[i - 1]] > beta[b[i]]) return false;
  return true;
}

}  // namespace

std::optional<CospanIso> find_cospan_iso(const ExtendedCospan& c1, const ExtendedCospan& c2) {
  if (c1.inputs.internal.size() != c2.inputs.internal.size() ||
      c1.outputs.internal.size() != c2.outputs.internal.size() ||
      c1.inputs.external.size() != c2.inputs.external.size() ||
      c1.outputs.external.size() != c2.outputs.external.size())
    return std::nullopt;
  EmbedOptions o;
  o.mode = EmbedMode::Iso;
  auto pin = [&](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      auto [it, fresh] = o.pins.emplace(a[k], b[k]);
      if (!fresh && it->second != b[k]) return false;
    }
    return true;
  };
  if (!pin(c1.inputs.external_vertices(), c2.inputs.external_vertices())) return std::nullopt;
  if (!pin(c1.outputs.external_vertices(), c2.outputs.external_vertices())) return std::nullopt;
  auto pin_in = interface_partition(c1, Side::In);
  auto pin_out = interface_partition(c1, Side::Out);
  std::optional<CospanIso> found;
  for_each_embedding(c1.carrier, c2.carrier, o, [&](const Homomorphism& h) {
    auto bi = position_map(h, c1.inputs.internal, c2.inputs.internal);
    if (!bi || !order_preserved(pin_in, *bi)) return true;
    auto bo = position_map(h, c1.outputs.internal, c2.outputs.internal);
    if (!bo || !order_preserved(pin_out, *bo)) return true;
    for (std::size_t k = 0; k < c1.inputs.external.size(); ++k)
      if ((*bi)[c1.inputs.external[k]] != c2.inputs.external[k]) return true;
    for (std::size_t k = 0; k < c1.outputs.external.size(); ++k)
      if ((*bo)[c1.outputs.external[k]] != c2.outputs.external[k]) return true;
    found = CospanIso{h, *bi, *bo};
    return false;
  });
  return found;
}

ExtendedCospan renumbered(const ExtendedCospan& c) {
  ExtendedCospan r;
  Homomorphism h;
  for (const auto& [v, t] : c.carrier.vertices()) h.vertices[v] = r.carrier.add_vertex(t);
  for (const auto& [id, e] : c.carrier.edges()) {
    Edge d = e;
    for (auto& v : d.sources) v = h(v);
    for (auto& v : d.targets) v = h(v);
    h.edges[id] = r.carrier.add_edge(std::move(d));
  }
  for (const auto& [x, p] : c.carrier.parents()) r.carrier.set_parent(h(x), ParentRef{h(p.edge), p.kind});
  // blocks renumbered densely per box, in order of first appearance
  std::map<std::pair<EdgeId, BlockId>, BlockId> dense;
  std::map<EdgeId, BlockId> next;
  auto remap = [&](ElemRef x) {
    auto b = c.carrier.block(x);
    if (!b) return;
    EdgeId box = c.carrier.parent(x)->edge;
    auto [it, fresh] = dense.emplace(std::make_pair(box, *b), next[box]);
    if (fresh) ++next[box];
    r.carrier.set_block(h(x), it->second);
  };
  for (const auto& [v, t] : c.carrier.vertices()) remap(ElemRef::of(v));
  for (const auto& [id, e] : c.carrier.edges()) remap(ElemRef::of(id));
  r.inputs = c.inputs;
  r.outputs = c.outputs;
  for (auto& v : r.inputs.internal) v = h(v);
  for (auto& v : r.outputs.internal) v = h(v);
  return r;
}

}  // namespace egb
