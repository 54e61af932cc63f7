#include "egb/saturate.hpp"

#include <algorithm>
#include <stdexcept>

#include "egb/embed.hpp"
#include "egb/interp.hpp"

namespace egb {

RewriteRule lift_rule(const RewriteRule& r) { return RewriteRule{r.name, r.lhs, join(r.lhs, r.rhs)}; }

RewriteRule lift_rule(const TermRule& r) {
  check_rule(r);
  return lift_rule(RewriteRule{r.name, interpret(r.lhs), interpret(r.rhs)});
}

namespace {

bool image_present(const Homomorphism& m, const EHypergraph& g) {
  for (const auto& [a, b] : m.vertices)
    if (!g.has_vertex(b)) return false;
  for (const auto& [a, b] : m.edges)
    if (!g.has_edge(b)) return false;
  return true;
}

struct Seen {
  std::vector<std::pair<std::size_t, ExtendedCospan>> states;

  bool contains(const ExtendedCospan& c) const {
    std::size_t fp = fingerprint(c.carrier);
    for (const auto& [f, s] : states)
      if (f == fp && find_cospan_iso(s, c)) return true;
    return false;
  }
  void add(const ExtendedCospan& c) { states.emplace_back(fingerprint(c.carrier), c); }
};

std::vector<const RewriteRule*> ordered(const std::vector<RewriteRule>& rules) {
  std::vector<const RewriteRule*> out;
  for (const auto& r : rules) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->name < b->name; });
  return out;
}

bool liftable(SchemaId s) { return s == SchemaId::Beta || s == SchemaId::Eta || s == SchemaId::LambdaNat; }

}  // namespace

SaturationResult saturate(const ExtendedCospan& g, const SaturationConfig& cfg) {
  if (cfg.max_iterations == 0 || cfg.max_elements == 0) throw std::invalid_argument("saturation limits must be positive");
  if (auto vs = validate(g.carrier); !vs.empty()) throw std::invalid_argument("invalid input: " + to_string(vs.front()));

  SaturationResult res;
  auto& rep = res.report;
  rep.initial_elements = g.carrier.element_count();
  ExtendedCospan cur = normalize(g);
  Seen seen;
  seen.add(cur);

  std::vector<std::pair<std::string, RewriteRule>> lifted;
  for (const auto* r : ordered(cfg.rules)) lifted.emplace_back(r->name, lift_rule(*r));

  bool stop = false;
  // Applies a lifted rule; true when the state changed.
  auto attempt = [&](std::size_t it, const RewriteRule& rule, const Match& m, TraceEntry entry) {
    auto out = apply_rewrite(cur, rule, m);
    if (!out.result) {
      ++rep.rejected;
      return false;
    }
    std::vector<NormalizeStep> steps;
    ExtendedCospan next = normalize(*out.result, &steps);
    if (seen.contains(next)) {
      ++rep.skipped;
      return false;
    }
    cur = std::move(next);
    seen.add(cur);
    ++rep.applications;
    entry.iteration = it;
    entry.kind = out.kind;
    entry.normalize_steps = steps.size();
    entry.elements = cur.carrier.element_count();
    rep.trace.push_back(std::move(entry));
    if (cur.carrier.element_count() > cfg.max_elements) {
      rep.limit_exceeded = true;
      rep.limit = "elements";
      stop = true;
    }
    return true;
  };

  for (std::size_t it = 1; it <= cfg.max_iterations && !stop; ++it) {
    rep.iterations = it;
    bool changed = false;
    for (const auto& [name, rule] : lifted) {
      for (const auto& m : find_convex_matches(rule.lhs, cur)) {
        if (stop) break;
        if (!image_present(m.embedding, cur.carrier)) continue;
        TraceEntry e;
        e.rule = name;
        e.match = m.embedding;
        changed |= attempt(it, rule, m, std::move(e));
      }
    }
    for (SchemaId s : cfg.schemas) {
      if (!liftable(s)) continue;
      for (EdgeId anchor : find_schema_sites(cur, s)) {
        if (stop) break;
        if (!cur.carrier.has_edge(anchor)) continue;
        SchemaInstance inst;
        try {
          inst = instantiate_schema(s, cur, anchor);
        } catch (const ShapeMismatch&) {
          continue;
        }
        TraceEntry e;
        e.rule = to_string(s);
        e.schema = s;
        e.anchor = anchor;
        changed |= attempt(it, lift_rule(inst.rule), inst.match, std::move(e));
      }
    }
    if (!changed && !stop) {
      rep.fixpoint = true;
      break;
    }
  }
  if (!rep.fixpoint && !rep.limit_exceeded) {
    rep.limit_exceeded = true;
    rep.limit = "iterations";
  }
  rep.final_elements = cur.carrier.element_count();
  rep.elements_created = rep.final_elements > rep.initial_elements ? rep.final_elements - rep.initial_elements : 0;
  res.graph = std::move(cur);
  return res;
}

ExtendedCospan replay(const ExtendedCospan& g, const SaturationConfig& cfg, const std::vector<TraceEntry>& trace) {
  ExtendedCospan cur = normalize(g);
  for (const auto& e : trace) {
    RewriteRule rule;
    Match m;
    if (e.schema) {
      auto inst = instantiate_schema(*e.schema, cur, e.anchor);
      rule = lift_rule(inst.rule);
      m = inst.match;
    } else {
      auto it = std::find_if(cfg.rules.begin(), cfg.rules.end(), [&](const auto& r) { return r.name == e.rule; });
      if (it == cfg.rules.end()) throw std::invalid_argument("trace names unknown rule " + e.rule);
      rule = lift_rule(*it);
      m.embedding = e.match;
    }
    auto out = apply_rewrite(cur, rule, m);
    if (!out.result) throw std::runtime_error("trace step " + e.rule + " does not apply: " + out.reason);
    cur = normalize(*out.result);
  }
  return cur;
}

bool contains_block_iso(const ExtendedCospan& g, const ExtendedCospan& candidate) {
  if (find_cospan_iso(g, candidate)) return true;
  for (const auto& b : all_blocks(g))
    if (find_cospan_iso(b, candidate)) return true;
  return false;
}

ExtendedCospan extract_smallest(const ExtendedCospan& g) {
  for (const auto& [id, e] : g.carrier.edges()) {
    if (e.kind != EdgeKind::EBox || g.carrier.parent(id)) continue;
    if (!is_join_normal(g)) break;
    std::optional<ExtendedCospan> best;
    for (BlockId b : g.carrier.block_ids(id)) {
      auto c = inner_cospan(g, id, b);
      if (!best || c.carrier.edges().size() < best->carrier.edges().size()) best = std::move(c);
    }
    if (best) return *best;
  }
  return g;
}

}  // namespace egb
