#include "egb/embed.hpp"

#include <algorithm>
#include <functional>

namespace egb {

namespace {

std::size_t depth_of(const EHypergraph& g, ElemRef x) { return predecessors(g, x).size(); }

class Embedder {
 public:
  Embedder(const EHypergraph& p, const EHypergraph& t, const EmbedOptions& o,
           const std::function<bool(const Homomorphism&)>& visit)
      : p_(p), t_(t), o_(o), visit_(visit), tinc_(incidence(t)) {}

  void run() {
    if (iso()) {
      if (p_.vertices().size() != t_.vertices().size() || p_.edges().size() != t_.edges().size()) return;
      if (fingerprint(p_) != fingerprint(t_)) return;
    } else if (p_.vertices().size() > t_.vertices().size() || p_.edges().size() > t_.edges().size()) {
      return;
    }
    for (const auto& [pv, tv] : o_.pins)
      if (!t_.has_vertex(tv) || !p_.has_vertex(pv)) return;
    plan();
    for (const auto& [id, e] : t_.edges()) by_label_[key(e)].push_back(id);
    for (const auto& [x, p] : t_.parents()) tchildren_[p.edge].push_back(x);
    step(0);
  }

 private:
  bool iso() const { return o_.mode == EmbedMode::Iso; }

  static std::string key(const Edge& e) { return std::to_string(static_cast<int>(e.kind)) + e.op.name; }

  void plan() {
    std::vector<EdgeId> rest;
    for (const auto& [id, e] : p_.edges()) rest.push_back(id);
    std::set<VertexId> touched;
    std::set<EdgeId> placed;
    while (!rest.empty()) {
      auto best = rest.begin();
      auto score = [&](EdgeId id) {
        std::size_t d = depth_of(p_, ElemRef::of(id));
        const Edge& e = p_.edge(id);
        std::size_t hits = 0;
        for (const auto* side : {&e.sources, &e.targets})
          for (auto v : *side) hits += touched.count(v);
        bool parent_ok = true;
        if (auto par = p_.parent(id)) parent_ok = placed.count(par->edge) != 0;
        // lower is better
        return std::make_tuple(parent_ok ? 0 : 1, hits ? 0 : 1, d, id.value);
      };
      for (auto it = rest.begin(); it != rest.end(); ++it)
        if (score(*it) < score(*best)) best = it;
      EdgeId id = *best;
      rest.erase(best);
      order_.push_back(ElemRef::of(id));
      placed.insert(id);
      const Edge& e = p_.edge(id);
      for (const auto* side : {&e.sources, &e.targets})
        for (auto v : *side) touched.insert(v);
    }
    std::vector<std::pair<std::size_t, VertexId>> iso_vs;
    for (const auto& [v, t] : p_.vertices())
      if (!touched.count(v)) iso_vs.emplace_back(depth_of(p_, ElemRef::of(v)), v);
    std::sort(iso_vs.begin(), iso_vs.end());
    for (auto& [d, v] : iso_vs) order_.push_back(ElemRef::of(v));
  }

  bool parent_ok(ElemRef px, ElemRef tx) const {
    auto pp = p_.parent(px);
    auto tp = t_.parent(tx);
    if (!pp) return !iso() || !tp;
    if (!tp || tp->kind != pp->kind) return false;
    auto it = emap_.find(pp->edge);
    return it != emap_.end() && it->second == tp->edge;
  }

  // Records the block correspondence for an element; returns false on clash.
  bool bind_block(ElemRef px, ElemRef tx, std::vector<std::function<void()>>& undo) {
    auto pb = p_.block(px);
    auto tb = t_.block(tx);
    if (!pb) return !iso() || !tb;
    if (!tb) return false;
    EdgeId pbox = p_.parent(px)->edge;
    EdgeId tbox = t_.parent(tx)->edge;
    auto fk = std::make_pair(pbox, *pb);
    auto it = fwd_.find(fk);
    if (it != fwd_.end()) return it->second == *tb;
    auto bk = std::make_pair(tbox, *tb);
    if (iso() && bwd_.count(bk)) return false;
    fwd_[fk] = *tb;
    undo.push_back([this, fk] { fwd_.erase(fk); });
    if (iso()) {
      bwd_[bk] = *pb;
      undo.push_back([this, bk] { bwd_.erase(bk); });
    }
    return true;
  }

  bool bind_vertex(VertexId pv, VertexId tv, std::vector<std::function<void()>>& undo) {
    auto it = vmap_.find(pv);
    if (it != vmap_.end()) return it->second == tv;
    if (vused_.count(tv)) return false;
    if (auto pin = o_.pins.find(pv); pin != o_.pins.end() && pin->second != tv) return false;
    if (!(p_.vertex_type(pv) == t_.vertex_type(tv))) return false;
    if (!parent_ok(ElemRef::of(pv), ElemRef::of(tv))) return false;
    if (!bind_block(ElemRef::of(pv), ElemRef::of(tv), undo)) return false;
    vmap_[pv] = tv;
    vused_.insert(tv);
    undo.push_back([this, pv, tv] {
      vmap_.erase(pv);
      vused_.erase(tv);
    });
    return true;
  }

  bool try_edge(EdgeId pe, EdgeId te, std::vector<std::function<void()>>& undo) {
    if (eused_.count(te)) return false;
    const Edge& a = p_.edge(pe);
    const Edge& b = t_.edge(te);
    if (a.kind != b.kind || a.sources.size() != b.sources.size() || a.targets.size() != b.targets.size())
      return false;
    if (a.kind == EdgeKind::Plain && !(a.op == b.op)) return false;
    if (!parent_ok(ElemRef::of(pe), ElemRef::of(te))) return false;
    if (!bind_block(ElemRef::of(pe), ElemRef::of(te), undo)) return false;
    emap_[pe] = te;
    eused_.insert(te);
    undo.push_back([this, pe, te] {
      emap_.erase(pe);
      eused_.erase(te);
    });
    for (std::size_t i = 0; i < a.sources.size(); ++i)
      if (!bind_vertex(a.sources[i], b.sources[i], undo)) return false;
    for (std::size_t i = 0; i < a.targets.size(); ++i)
      if (!bind_vertex(a.targets[i], b.targets[i], undo)) return false;
    return true;
  }

  std::vector<EdgeId> edge_candidates(EdgeId pe) {
    const Edge& a = p_.edge(pe);
    for (std::size_t i = 0; i < a.sources.size(); ++i)
      if (auto it = vmap_.find(a.sources[i]); it != vmap_.end()) {
        std::vector<EdgeId> out;
        for (auto c : tinc_.consumers[it->second]) {
          const Edge& b = t_.edge(c);
          if (b.sources.size() == a.sources.size() && b.sources[i] == it->second) out.push_back(c);
        }
        return out;
      }
    for (std::size_t i = 0; i < a.targets.size(); ++i)
      if (auto it = vmap_.find(a.targets[i]); it != vmap_.end()) {
        std::vector<EdgeId> out;
        for (auto c : tinc_.producers[it->second]) {
          const Edge& b = t_.edge(c);
          if (b.targets.size() == a.targets.size() && b.targets[i] == it->second) out.push_back(c);
        }
        return out;
      }
    if (auto par = p_.parent(pe)) {
      std::vector<EdgeId> out;
      for (auto x : tchildren_[emap_.at(par->edge)])
        if (x.is_edge()) out.push_back(x.edge());
      return out;
    }
    auto it = by_label_.find(key(a));
    if (it == by_label_.end()) return {};
    return it->second;
  }

  std::vector<VertexId> vertex_candidates(VertexId pv) {
    if (auto pin = o_.pins.find(pv); pin != o_.pins.end()) return {pin->second};
    std::vector<VertexId> out;
    if (auto par = p_.parent(pv)) {
      for (auto x : tchildren_[emap_.at(par->edge)])
        if (x.is_vertex()) out.push_back(x.vertex());
      return out;
    }
    for (const auto& [v, t] : t_.vertices()) out.push_back(v);
    return out;
  }

  bool step(std::size_t k) {
    if (k == order_.size()) {
      Homomorphism h;
      h.vertices = vmap_;
      h.edges = emap_;
      return visit_(h);
    }
    ElemRef x = order_[k];
    if (x.is_edge()) {
      for (auto te : edge_candidates(x.edge())) {
        std::vector<std::function<void()>> undo;
        bool ok = try_edge(x.edge(), te, undo);
        bool go_on = ok ? step(k + 1) : true;
        for (auto it = undo.rbegin(); it != undo.rend(); ++it) (*it)();
        if (!go_on) return false;
      }
    } else {
      for (auto tv : vertex_candidates(x.vertex())) {
        std::vector<std::function<void()>> undo;
        bool ok = bind_vertex(x.vertex(), tv, undo);
        bool go_on = ok ? step(k + 1) : true;
        for (auto it = undo.rbegin(); it != undo.rend(); ++it) (*it)();
        if (!go_on) return false;
      }
    }
    return true;
  }

  const EHypergraph& p_;
  const EHypergraph& t_;
  const EmbedOptions& o_;
  const std::function<bool(const Homomorphism&)>& visit_;
  Incidence tinc_;
  std::vector<ElemRef> order_;
  std::map<std::string, std::vector<EdgeId>> by_label_;
  std::map<EdgeId, std::vector<ElemRef>> tchildren_;
  std::map<VertexId, VertexId> vmap_;
  std::set<VertexId> vused_;
  std::map<EdgeId, EdgeId> emap_;
  std::set<EdgeId> eused_;
  std::map<std::pair<EdgeId, BlockId>, BlockId> fwd_;
  std::map<std::pair<EdgeId, BlockId>, BlockId> bwd_;
};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

void for_each_embedding(const EHypergraph& pattern, const EHypergraph& target, const EmbedOptions& options,
                        const std::function<bool(const Homomorphism&)>& visit) {
  Embedder(pattern, target, options, visit).run();
}

std::vector<Homomorphism> all_embeddings(const EHypergraph& pattern, const EHypergraph& target,
                                         const EmbedOptions& options, std::size_t limit) {
  std::vector<Homomorphism> out;
  if (limit == 0) return out;
  for_each_embedding(pattern, target, options, [&](const Homomorphism& h) {
    out.push_back(h);
    return out.size() < limit;
  });
  return out;
}

std::size_t fingerprint(const EHypergraph& g) {
  std::vector<std::size_t> items;
  for (const auto& [v, t] : g.vertices())
    items.push_back(mix(mix(1, t.expr().hash()), predecessors(g, ElemRef::of(v)).size()));
  for (const auto& [id, e] : g.edges()) {
    std::size_t h = mix(2, static_cast<std::size_t>(e.kind));
    h = mix(h, std::hash<std::string>{}(e.op.name));
    h = mix(mix(h, e.sources.size()), e.targets.size());
    h = mix(h, predecessors(g, ElemRef::of(id)).size());
    items.push_back(h);
  }
  std::sort(items.begin(), items.end());
  std::size_t h = 0;
  for (auto i : items) h = mix(h, i);
  return h;
}

std::optional<Homomorphism> find_isomorphism(const EHypergraph& g, const EHypergraph& h) {
  EmbedOptions o;
  o.mode = EmbedMode::Iso;
  auto r = all_embeddings(g, h, o, 1);
  if (r.empty()) return std::nullopt;
  return r.front();
}

}  // namespace egb
