#include "egb/schema.hpp"

#include <algorithm>
#include <map>

#include "egb/interp.hpp"

namespace egb {

namespace {

const std::vector<std::pair<SchemaId, std::string>>& names() {
  static const std::vector<std::pair<SchemaId, std::string>> n = {
      {SchemaId::AssocPlus, "assoc+"},   {SchemaId::CommPlus, "comm+"},
      {SchemaId::IdemPlus, "idem+"},     {SchemaId::DistTensorPlus, "dist-tensor+"},
      {SchemaId::DistSeqPlus, "dist-seq+"}, {SchemaId::DistLambdaPlus, "dist-lambda+"},
      {SchemaId::Beta, "beta"},          {SchemaId::Eta, "eta"},
      {SchemaId::LambdaNat, "lambda-nat"}};
  return n;
}

struct Scope {
  std::optional<ParentRef> parent;
  std::optional<BlockId> block;
  friend bool operator==(const Scope&, const Scope&) = default;
};

Scope scope_of(const EHypergraph& g, ElemRef x) { return {g.parent(x), g.block(x)}; }

std::vector<ElemRef> members(const EHypergraph& g, const Scope& s) {
  std::vector<ElemRef> out;
  for (const auto& [v, t] : g.vertices())
    if (scope_of(g, ElemRef::of(v)) == s) out.push_back(ElemRef::of(v));
  for (const auto& [e, d] : g.edges())
    if (scope_of(g, ElemRef::of(e)) == s) out.push_back(ElemRef::of(e));
  return out;
}

void add_tree(const EHypergraph& g, ElemRef x, std::set<ElemRef>& out) {
  out.insert(x);
  if (x.is_edge()) {
    auto d = descendants(g, x.edge());
    out.insert(d.begin(), d.end());
  }
}

void add_vertices(const std::vector<VertexId>& vs, std::set<ElemRef>& out) {
  for (VertexId v : vs) out.insert(ElemRef::of(v));
}

std::vector<VertexId> scope_interface(const ExtendedCospan& g, const Scope& s, Side side) {
  const auto& itf = side == Side::In ? g.inputs.internal : g.outputs.internal;
  std::vector<VertexId> out;
  for (VertexId v : itf)
    if (scope_of(g.carrier, ElemRef::of(v)) == s) out.push_back(v);
  return out;
}

Word types(const EHypergraph& g, const std::vector<VertexId>& vs) {
  Word w;
  for (VertexId v : vs) w.push_back(g.vertex_type(v));
  return w;
}

std::vector<VertexId> ports(const ExtendedCospan& g, EdgeId box, std::optional<BlockId> block, Side side) {
  std::vector<VertexId> out;
  for (VertexId v : box_ports(g, box, side))
    if (!block || g.carrier.block(v) == block) out.push_back(v);
  return out;
}

std::set<ElemRef> as_set(const std::vector<ElemRef>& xs) { return {xs.begin(), xs.end()}; }

// The only edge among the children of `box` (in `block`), when its endpoints
// are exactly the ports, in order.
std::optional<EdgeId> sole_child_on_ports(const ExtendedCospan& g, EdgeId box, std::optional<BlockId> block) {
  std::optional<EdgeId> only;
  std::set<ElemRef> verts;
  for (ElemRef x : g.carrier.children(box)) {
    if (block && g.carrier.block(x) != block) continue;
    if (x.is_vertex()) {
      verts.insert(x);
    } else {
      if (only) return std::nullopt;
      only = x.edge();
    }
  }
  if (!only) return std::nullopt;
  const Edge& e = g.carrier.edge(*only);
  if (e.sources != ports(g, box, block, Side::In) || e.targets != ports(g, box, block, Side::Out)) return std::nullopt;
  std::set<ElemRef> ends;
  add_vertices(e.sources, ends);
  add_vertices(e.targets, ends);
  if (ends != verts) return std::nullopt;
  return only;
}

std::set<ElemRef> box_with_feet(const EHypergraph& g, EdgeId e) {
  std::set<ElemRef> s;
  add_tree(g, ElemRef::of(e), s);
  add_vertices(g.edge(e).sources, s);
  add_vertices(g.edge(e).targets, s);
  return s;
}

ExtendedCospan box_lhs(const ExtendedCospan& g, EdgeId e) {
  const Edge& d = g.carrier.edge(e);
  return sub_cospan(g, box_with_feet(g.carrier, e), d.sources, d.targets);
}

std::vector<ExtendedCospan> block_cospans(const ExtendedCospan& g, EdgeId e) {
  std::vector<ExtendedCospan> out;
  for (BlockId b : g.carrier.block_ids(e)) out.push_back(inner_cospan(g, e, b));
  return out;
}

// ---- predicates

bool is_ebox(const EHypergraph& g, EdgeId e) { return g.edge(e).kind == EdgeKind::EBox; }
bool is_lambda(const EHypergraph& g, EdgeId e) { return g.edge(e).kind == EdgeKind::LambdaBox; }

std::optional<std::vector<std::size_t>> idem_keep(const ExtendedCospan& g, EdgeId e) {
  auto blocks = block_cospans(g, e);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    bool dup = false;
    for (std::size_t k : keep)
      if (find_cospan_iso(blocks[k], blocks[i])) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  if (keep.size() == blocks.size()) return std::nullopt;
  return keep;
}

bool assoc_fits(const ExtendedCospan& g, EdgeId e) {
  for (BlockId b : g.carrier.block_ids(e)) {
    auto f = sole_child_on_ports(g, e, b);
    if (f && is_ebox(g.carrier, *f)) return true;
  }
  return false;
}

// 0: no, 1: connected to a sibling (or ports out of order), 2: disconnected.
int dist_kind(const ExtendedCospan& g, EdgeId e) {
  const auto& G = g.carrier;
  Scope s = scope_of(G, ElemRef::of(e));
  const Edge& d = G.edge(e);
  auto mem = members(G, s);
  std::set<ElemRef> expect{ElemRef::of(e)};
  add_vertices(d.sources, expect);
  add_vertices(d.targets, expect);
  bool exact = as_set(mem) == expect && d.sources == scope_interface(g, s, Side::In) &&
               d.targets == scope_interface(g, s, Side::Out);
  if (exact) return 0;
  std::set<VertexId> feet(d.sources.begin(), d.sources.end());
  feet.insert(d.targets.begin(), d.targets.end());
  bool extra = false;
  for (ElemRef x : mem) {
    if (x == ElemRef::of(e)) continue;
    if (x.is_vertex()) {
      if (!feet.count(x.vertex())) extra = true;
      continue;
    }
    extra = true;
    const Edge& h = G.edge(x.edge());
    for (const auto* side : {&h.sources, &h.targets})
      for (VertexId v : *side)
        if (feet.count(v)) return 1;
  }
  return extra ? 2 : 1;
}

bool dist_lambda_fits(const ExtendedCospan& g, EdgeId lam) {
  auto f = sole_child_on_ports(g, lam, std::nullopt);
  return f && is_ebox(g.carrier, *f);
}

std::optional<EdgeId> beta_box(const ExtendedCospan& g, EdgeId a) {
  const auto& G = g.carrier;
  const Edge& d = G.edge(a);
  if (d.kind != EdgeKind::Plain || !is_application_symbol(d.op) || d.sources.empty()) return std::nullopt;
  VertexId t = d.sources.front();
  for (const auto& [id, e] : G.edges()) {
    if (e.kind != EdgeKind::LambdaBox || e.targets.size() != 1 || e.targets.front() != t) continue;
    if (!(scope_of(G, ElemRef::of(id)) == scope_of(G, ElemRef::of(a)))) return std::nullopt;
    return id;
  }
  return std::nullopt;
}

bool eta_fits(const ExtendedCospan& g, EdgeId lam) {
  const auto& G = g.carrier;
  const Edge& d = G.edge(lam);
  if (d.sources.size() != 1 || d.targets.size() != 1) return false;
  if (G.vertex_type(d.sources[0]) != G.vertex_type(d.targets[0])) return false;
  auto a = sole_child_on_ports(g, lam, std::nullopt);
  if (!a) return false;
  const Edge& ad = G.edge(*a);
  return ad.kind == EdgeKind::Plain && is_application_symbol(ad.op);
}

// Position of the first lambda source run produced, in order, by one plain
// edge of the same scope.
std::optional<std::pair<std::size_t, EdgeId>> nat_site(const ExtendedCospan& g, EdgeId lam) {
  const auto& G = g.carrier;
  const Edge& d = G.edge(lam);
  auto inc = incidence(G);
  for (std::size_t k = 0; k < d.sources.size(); ++k) {
    auto it = inc.producers.find(d.sources[k]);
    if (it == inc.producers.end() || it->second.empty()) continue;
    EdgeId p = it->second.front();
    const Edge& pd = G.edge(p);
    if (pd.kind != EdgeKind::Plain || !(scope_of(G, ElemRef::of(p)) == scope_of(G, ElemRef::of(lam)))) continue;
    if (k + pd.targets.size() > d.sources.size()) continue;
    if (!std::equal(pd.targets.begin(), pd.targets.end(), d.sources.begin() + static_cast<std::ptrdiff_t>(k)))
      continue;
    return std::make_pair(k, p);
  }
  return std::nullopt;
}

bool fits(SchemaId s, const ExtendedCospan& g, EdgeId e) {
  const auto& G = g.carrier;
  switch (s) {
    case SchemaId::AssocPlus:
      return is_ebox(G, e) && assoc_fits(g, e);
    case SchemaId::CommPlus:
      return is_ebox(G, e) && G.block_ids(e).size() >= 2;
    case SchemaId::IdemPlus:
      return is_ebox(G, e) && idem_keep(g, e).has_value();
    case SchemaId::DistSeqPlus:
      return is_ebox(G, e) && dist_kind(g, e) == 1;
    case SchemaId::DistTensorPlus:
      return is_ebox(G, e) && dist_kind(g, e) == 2;
    case SchemaId::DistLambdaPlus:
      return is_lambda(G, e) && dist_lambda_fits(g, e);
    case SchemaId::Beta:
      return beta_box(g, e).has_value();
    case SchemaId::Eta:
      return is_lambda(G, e) && eta_fits(g, e);
    case SchemaId::LambdaNat:
      return is_lambda(G, e) && nat_site(g, e).has_value();
  }
  return false;
}

// ---- right-hand sides

ExtendedCospan generator_cospan(const OpSymbol& op) {
  ExtendedCospan c;
  std::vector<VertexId> in, out;
  for (const auto& t : op.inputs) in.push_back(c.carrier.add_vertex(t));
  for (const auto& t : op.outputs) out.push_back(c.carrier.add_vertex(t));
  c.carrier.add_plain(op, in, out);
  c.inputs.internal = in;
  c.outputs.internal = out;
  for (std::size_t i = 0; i < in.size(); ++i) c.inputs.external.push_back(i);
  for (std::size_t i = 0; i < out.size(); ++i) c.outputs.external.push_back(i);
  return c;
}

std::vector<VertexId> map_all(const Homomorphism& h, const std::vector<VertexId>& vs) {
  std::vector<VertexId> out;
  for (VertexId v : vs) out.push_back(h(v));
  return out;
}

void append(std::vector<VertexId>& a, const std::vector<VertexId>& b) { a.insert(a.end(), b.begin(), b.end()); }

void set_external_prefix(Interface& itf, std::size_t n) {
  itf.external.clear();
  for (std::size_t i = 0; i < n; ++i) itf.external.push_back(i);
}

// The scope of `e` with `e` replaced by each of its blocks.
ExtendedCospan dist_rhs(const ExtendedCospan& g, EdgeId e, const std::set<ElemRef>& scope,
                        const std::vector<VertexId>& ins, const std::vector<VertexId>& outs) {
  const auto& G = g.carrier;
  const Edge& d = G.edge(e);
  std::set<ElemRef> rest = scope;
  rest.erase(ElemRef::of(e));
  for (auto x : descendants(G, e)) rest.erase(x);
  ExtendedCospan x = sub_cospan(g, rest, ins, outs);
  Word zw = types(G, d.sources);
  for (const auto& t : types(G, d.targets)) zw.push_back(t);
  EHypergraph z = discrete(zw);
  std::vector<ExtendedCospan> alternatives;
  for (BlockId b : G.block_ids(e)) {
    ExtendedCospan y = inner_cospan(g, e, b);
    auto yi = y.inputs.external_vertices();
    auto yo = y.outputs.external_vertices();
    Homomorphism f, h;
    for (std::size_t k = 0; k < d.sources.size(); ++k) {
      f.vertices[VertexId{static_cast<std::uint32_t>(k)}] = d.sources[k];
      h.vertices[VertexId{static_cast<std::uint32_t>(k)}] = yi[k];
    }
    for (std::size_t k = 0; k < d.targets.size(); ++k) {
      VertexId zk{static_cast<std::uint32_t>(d.sources.size() + k)};
      f.vertices[zk] = d.targets[k];
      h.vertices[zk] = yo[k];
    }
    Pushout po = pushout(z, f, x.carrier, h, y.carrier);
    ExtendedCospan k;
    k.carrier = std::move(po.graph);
    k.inputs.internal = map_all(po.from_x, ins);
    append(k.inputs.internal, map_all(po.from_x, x.inputs.strictly_internal()));
    append(k.inputs.internal, map_all(po.from_y, y.inputs.strictly_internal()));
    k.outputs.internal = map_all(po.from_x, outs);
    append(k.outputs.internal, map_all(po.from_x, x.outputs.strictly_internal()));
    append(k.outputs.internal, map_all(po.from_y, y.outputs.strictly_internal()));
    set_external_prefix(k.inputs, ins.size());
    set_external_prefix(k.outputs, outs.size());
    alternatives.push_back(std::move(k));
  }
  return join_all(alternatives);
}

struct LambdaWords {
  Word ctx, bound, result;
};

LambdaWords lambda_words(const ExtendedCospan& g, EdgeId lam) {
  const auto& G = g.carrier;
  LambdaWords w;
  w.ctx = types(G, G.edge(lam).sources);
  Word in = types(G, ports(g, lam, std::nullopt, Side::In));
  if (in.size() < w.ctx.size()) throw ShapeMismatch("lambda box ports shorter than its context");
  w.bound.assign(in.begin() + static_cast<std::ptrdiff_t>(w.ctx.size()), in.end());
  w.result = types(G, ports(g, lam, std::nullopt, Side::Out));
  return w;
}

SchemaInstance build(SchemaId s, const ExtendedCospan& g, EdgeId anchor) {
  const auto& G = g.carrier;
  if (!G.has_edge(anchor)) throw ShapeMismatch("no edge " + to_string(anchor));
  if (!fits(s, g, anchor)) throw ShapeMismatch(to_string(s) + " does not fit at " + to_string(anchor));
  SchemaInstance inst;
  inst.rule.name = to_string(s) + "@" + to_string(anchor);
  auto& L = inst.rule.lhs;
  auto& R = inst.rule.rhs;
  switch (s) {
    case SchemaId::AssocPlus: {
      L = box_lhs(g, anchor);
      std::vector<ExtendedCospan> blocks;
      for (BlockId b : G.block_ids(anchor)) {
        auto f = sole_child_on_ports(g, anchor, b);
        if (f && is_ebox(G, *f)) {
          for (auto& c : block_cospans(g, *f)) blocks.push_back(std::move(c));
        } else {
          blocks.push_back(inner_cospan(g, anchor, b));
        }
      }
      R = join_all(blocks);
      break;
    }
    case SchemaId::CommPlus: {
      L = box_lhs(g, anchor);
      auto blocks = block_cospans(g, anchor);
      std::reverse(blocks.begin(), blocks.end());
      R = join_all(blocks);
      break;
    }
    case SchemaId::IdemPlus: {
      L = box_lhs(g, anchor);
      auto blocks = block_cospans(g, anchor);
      std::vector<ExtendedCospan> kept;
      auto keep = idem_keep(g, anchor);
      for (std::size_t i : *keep) kept.push_back(blocks[i]);
      R = join_all(kept);
      break;
    }
    case SchemaId::DistSeqPlus:
    case SchemaId::DistTensorPlus: {
      Scope sc = scope_of(G, ElemRef::of(anchor));
      std::set<ElemRef> elems;
      for (ElemRef x : members(G, sc)) add_tree(G, x, elems);
      auto ins = scope_interface(g, sc, Side::In);
      auto outs = scope_interface(g, sc, Side::Out);
      L = sub_cospan(g, elems, ins, outs);
      R = dist_rhs(g, anchor, elems, ins, outs);
      break;
    }
    case SchemaId::DistLambdaPlus: {
      L = box_lhs(g, anchor);
      auto w = lambda_words(g, anchor);
      EdgeId f = *sole_child_on_ports(g, anchor, std::nullopt);
      std::vector<ExtendedCospan> alternatives;
      for (auto& c : block_cospans(g, f)) alternatives.push_back(abstraction(w.ctx, w.bound, w.result, c));
      R = join_all(alternatives);
      break;
    }
    case SchemaId::Beta: {
      EdgeId lam = *beta_box(g, anchor);
      const Edge& a = G.edge(anchor);
      const Edge& ld = G.edge(lam);
      std::set<ElemRef> elems = box_with_feet(G, lam);
      elems.insert(ElemRef::of(anchor));
      add_vertices(a.sources, elems);
      add_vertices(a.targets, elems);
      std::vector<VertexId> ins = ld.sources;
      ins.insert(ins.end(), a.sources.begin() + 1, a.sources.end());
      L = sub_cospan(g, elems, ins, a.targets);
      R = inner_cospan(g, lam);
      break;
    }
    case SchemaId::Eta: {
      L = box_lhs(g, anchor);
      R = identity(types(G, G.edge(anchor).sources));
      break;
    }
    case SchemaId::LambdaNat: {
      auto [k, p] = *nat_site(g, anchor);
      const Edge& ld = G.edge(anchor);
      const Edge& pd = G.edge(p);
      std::set<ElemRef> elems = box_with_feet(G, anchor);
      elems.insert(ElemRef::of(p));
      add_vertices(pd.sources, elems);
      auto n = static_cast<std::ptrdiff_t>(pd.targets.size());
      auto kk = static_cast<std::ptrdiff_t>(k);
      std::vector<VertexId> ins(ld.sources.begin(), ld.sources.begin() + kk);
      ins.insert(ins.end(), pd.sources.begin(), pd.sources.end());
      ins.insert(ins.end(), ld.sources.begin() + kk + n, ld.sources.end());
      L = sub_cospan(g, elems, ins, ld.targets);
      auto w = lambda_words(g, anchor);
      Word before(w.ctx.begin(), w.ctx.begin() + kk);
      Word after(w.ctx.begin() + kk + n, w.ctx.end());
      after.insert(after.end(), w.bound.begin(), w.bound.end());
      auto pre = tensor(identity(before), tensor(generator_cospan(pd.op), identity(after)));
      auto body = compose(pre, inner_cospan(g, anchor));
      R = abstraction(types(G, ins), w.bound, w.result, body);
      break;
    }
  }
  if (L.external_input_word() != R.external_input_word() || L.external_output_word() != R.external_output_word())
    throw ShapeMismatch(to_string(s) + " at " + to_string(anchor) + ": sides have different types");
  inst.match.embedding = identity_homomorphism(L.carrier);
  return inst;
}

}  // namespace

std::string to_string(SchemaId s) {
  for (const auto& [id, n] : names())
    if (id == s) return n;
  return "?";
}

std::optional<SchemaId> schema_from_string(const std::string& name) {
  for (const auto& [id, n] : names())
    if (n == name) return id;
  return std::nullopt;
}

const std::vector<SchemaId>& all_schemas() {
  static const std::vector<SchemaId> all = [] {
    std::vector<SchemaId> v;
    for (const auto& [id, n] : names()) v.push_back(id);
    return v;
  }();
  return all;
}

ExtendedCospan sub_cospan(const ExtendedCospan& g, const std::set<ElemRef>& elems, const std::vector<VertexId>& ext_in,
                          const std::vector<VertexId>& ext_out) {
  ExtendedCospan c;
  c.carrier = induced(g.carrier, elems);
  auto nested = [&](VertexId v) {
    if (!c.carrier.has_vertex(v)) return false;
    auto p = c.carrier.parent(v);
    return p.has_value();
  };
  auto fill = [&](Interface& out, const std::vector<VertexId>& ext, const std::vector<VertexId>& all) {
    out.internal = ext;
    set_external_prefix(out, ext.size());
    for (VertexId v : all)
      if (nested(v) && std::find(ext.begin(), ext.end(), v) == ext.end()) out.internal.push_back(v);
  };
  fill(c.inputs, ext_in, g.inputs.internal);
  fill(c.outputs, ext_out, g.outputs.internal);
  return c;
}

ExtendedCospan inner_cospan(const ExtendedCospan& g, EdgeId box, std::optional<BlockId> block) {
  const auto& G = g.carrier;
  std::set<ElemRef> elems;
  for (ElemRef x : G.children(box))
    if (!block || G.block(x) == block) add_tree(G, x, elems);
  return sub_cospan(g, elems, ports(g, box, block, Side::In), ports(g, box, block, Side::Out));
}

std::vector<ExtendedCospan> all_blocks(const ExtendedCospan& g) {
  std::vector<ExtendedCospan> out;
  for (const auto& [id, e] : g.carrier.edges())
    if (e.kind == EdgeKind::EBox)
      for (auto& c : block_cospans(g, id)) out.push_back(std::move(c));
  return out;
}

bool is_join_normal(const ExtendedCospan& g) {
  const auto& G = g.carrier;
  std::vector<EdgeId> boxes;
  for (const auto& [id, e] : G.edges())
    if (e.kind == EdgeKind::EBox) boxes.push_back(id);
  if (boxes.empty()) return true;
  if (boxes.size() != 1 || G.parent(boxes.front())) return false;
  return dist_kind(g, boxes.front()) == 0;
}

std::vector<EdgeId> find_schema_sites(const ExtendedCospan& g, SchemaId s) {
  std::vector<EdgeId> out;
  for (const auto& [id, e] : g.carrier.edges())
    if (fits(s, g, id)) out.push_back(id);
  return out;
}

SchemaInstance instantiate_schema(SchemaId s, const ExtendedCospan& g, EdgeId anchor) { return build(s, g, anchor); }

ExtendedCospan normalize(const ExtendedCospan& g, std::vector<NormalizeStep>* steps, std::size_t max_steps) {
  static const SchemaId order[] = {SchemaId::IdemPlus, SchemaId::AssocPlus, SchemaId::DistLambdaPlus,
                                   SchemaId::DistSeqPlus, SchemaId::DistTensorPlus};
  ExtendedCospan cur = g;
  for (std::size_t n = 0; n < max_steps; ++n) {
    std::optional<NormalizeStep> step;
    for (const auto& [id, e] : cur.carrier.edges()) {
      if (e.kind == EdgeKind::Plain) continue;
      for (SchemaId s : order)
        if (fits(s, cur, id)) {
          step = NormalizeStep{s, id};
          break;
        }
      if (step) break;
    }
    if (!step) return cur;
    auto inst = build(step->schema, cur, step->anchor);
    auto out = apply_rewrite(cur, inst.rule, inst.match);
    if (!out.result)
      throw std::logic_error(to_string(step->schema) + " at " + to_string(step->anchor) + " failed: clause " +
                             std::to_string(out.failed_clause) + ": " + out.reason);
    cur = std::move(*out.result);
    if (steps) steps->push_back(*step);
  }
  return cur;
}

}  // namespace egb
