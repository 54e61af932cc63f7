// One line per acceptance criterion; exit status 0 iff every line is PASS.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "egb/interp.hpp"
#include "egb/saturate.hpp"
#include "egb/schema.hpp"
#include "egb/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace egb;
using namespace egb::testing;

namespace {

// Pinned tolerances and sizes.
constexpr std::size_t kPopulationNodes = 6;
constexpr std::size_t kSmcDepth = 4;
constexpr std::size_t kSmcCap = 4000;
constexpr std::size_t kPresentationSample = kSmcCap;
constexpr double kSmcSeconds = 60.0;
constexpr double kRewriteSeconds = 120.0;
constexpr std::size_t kSpans = 200;
constexpr std::size_t kSpanElements = 6;
constexpr std::size_t kCoconesPerSpan = 64;
constexpr double kPushoutSeconds = 30.0;
constexpr std::size_t kFig2Iterations = 10;
constexpr std::size_t kFig2Elements = 200;
constexpr std::size_t kFig4Iterations = 3;
constexpr std::size_t kRandomTerms = 100;
constexpr std::size_t kRandomNodes = 8;
constexpr std::size_t kRandomJoins = 2;
constexpr unsigned kSeed = 20240611;
constexpr double kNormalFormSeconds = 120.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const char* name, const std::function<Line()>& run) {
  Line l;
  try {
    l = run();
  } catch (const std::exception& e) {
    l = {false, std::string("exception: ") + e.what()};
  }
  if (!l.pass) ++failures;
  std::printf("[%s] %d %s: %s\n", l.pass ? "PASS" : "FAIL", n, name, l.detail.c_str());
  std::fflush(stdout);
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", s);
  return buf;
}

bool any_iso(const ExtendedCospan& c, const std::vector<ExtendedCospan>& pool) {
  for (const auto& p : pool)
    if (find_cospan_iso(c, p)) return true;
  return false;
}

std::vector<Term> sample(const std::vector<Term>& ts, std::size_t k) {
  if (ts.size() <= k) return ts;
  std::vector<Term> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ts[i * ts.size() / k]);
  return out;
}

Line smc_absorption() {
  auto t0 = Clock::now();
  auto sig = population_signature();
  auto terms = enumerate_terms(sig, kPopulationNodes);
  std::size_t checked = 0, bad = 0, capped = 0;
  for (const auto& t : terms) {
    auto base = interpret(t);
    audit().cospan("smc base", base);
    auto ps = smc_presentations(t, kSmcDepth, kSmcCap);
    capped += ps.bound_exhausted;
    for (const auto& p : sample(ps.terms, kPresentationSample)) {
      auto c = interpret(p);
      ++checked;
      if (!find_cospan_iso(base, c)) {
        ++bad;
        audit().cospan("smc presentation", c);
      }
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << checked - bad << "/" << checked << " presentations of " << terms.size() << " terms iso to their base ("
    << capped << " closures capped at " << kSmcCap << ", " << fmt_seconds(s) << ", limit " << kSmcSeconds << " s)";
  return {bad == 0 && s < kSmcSeconds, d.str()};
}

Line rewrite_agreement() {
  auto t0 = Clock::now();
  auto sig = population_signature();
  TermRule rule{"mf", parse_term("m ; f", sig), parse_term("(f * f) ; m", sig)};
  RewriteRule graph_rule{"mf", interpret(rule.lhs), interpret(rule.rhs)};
  auto terms = enumerate_terms(sig, kPopulationNodes);
  std::size_t redexes = 0, bad = 0, exhausted = 0, steps = 0;
  for (const auto& t : terms) {
    auto g = interpret(t);
    std::vector<ExtendedCospan> by_graph;
    for (const auto& m : find_convex_matches(graph_rule, g)) {
      auto out = apply_rewrite(g, graph_rule, m);
      if (!out.result) continue;
      audit().cospan("edpoi", *out.result);
      if (!any_iso(*out.result, by_graph)) by_graph.push_back(*out.result);
    }
    auto ts = term_rewrite_step(t, rule, kSmcDepth);
    exhausted += ts.bound_exhausted;
    std::vector<ExtendedCospan> by_term;
    for (const auto& r : ts.terms) {
      auto c = interpret(r);
      if (!any_iso(c, by_term)) by_term.push_back(c);
    }
    steps += by_term.size();
    redexes += !by_graph.empty();
    bool agree = by_graph.size() == by_term.size();
    for (const auto& c : by_graph) agree = agree && any_iso(c, by_term);
    for (const auto& c : by_term) agree = agree && any_iso(c, by_graph);
    if (!agree) {
      ++bad;
      if (bad <= 3)
        std::cerr << "criterion 2 disagreement on " << to_string(t) << ": graph " << by_graph.size() << ", term "
                  << by_term.size() << "\n";
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << terms.size() - bad << "/" << terms.size() << " terms agree (" << redexes << " with a redex, " << steps
    << " distinct results, " << exhausted << " oracle closures capped, " << fmt_seconds(s) << ", limit "
    << kRewriteSeconds << " s)";
  return {bad == 0 && s < kRewriteSeconds, d.str()};
}

Line pushout_universal() {
  auto t0 = Clock::now();
  std::mt19937 rng(kSeed);
  std::size_t cocones = 0, bad = 0;
  for (std::size_t i = 0; i < kSpans; ++i) {
    auto s = random_span(rng, kSpanElements);
    auto po = pushout(s.z, s.f, s.x, s.g, s.y);
    audit().carrier("pushout", po.graph);
    if (!check_hom(po.from_x, s.x, po.graph) || !check_hom(po.from_y, s.y, po.graph)) {
      ++bad;
      continue;
    }
    // competing cocones into the pushout itself and into the pushout plus a
    // copy of y, found by exhaustive enumeration
    std::vector<EHypergraph> targets{po.graph, coproduct(po.graph, s.y).graph};
    for (const auto& w : targets) {
      auto mediators = all_homs(po.graph, w, {}, 200000);
      auto xs = all_homs(s.x, w, {}, 2000);
      auto ys = all_homs(s.y, w, {}, 2000);
      std::size_t here = 0;
      for (const auto& a : xs) {
        for (const auto& b : ys) {
          bool commutes = true;
          for (const auto& [v, t] : s.z.vertices()) commutes = commutes && a(s.f(v)) == b(s.g(v));
          if (!commutes) continue;
          if (++here > kCoconesPerSpan) break;
          ++cocones;
          std::size_t count = 0;
          for (const auto& u : mediators) {
            bool ok = true;
            for (const auto& [v, img] : po.from_x.vertices) ok = ok && u(img) == a(v);
            for (const auto& [e, img] : po.from_x.edges) ok = ok && u(img) == a(e);
            for (const auto& [v, img] : po.from_y.vertices) ok = ok && u(img) == b(v);
            for (const auto& [e, img] : po.from_y.edges) ok = ok && u(img) == b(e);
            count += ok;
          }
          if (count != 1) ++bad;
        }
        if (here > kCoconesPerSpan) break;
      }
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << cocones - bad << "/" << cocones << " cocones over " << kSpans << " spans have exactly one mediator ("
    << fmt_seconds(s) << ", limit " << kPushoutSeconds << " s)";
  return {bad == 0 && cocones > 0 && s < kPushoutSeconds, d.str()};
}

struct Site {
  std::string name;
  RewriteRule rule;
  ExtendedCospan graph;
  Match match;
};

std::vector<Site> complement_sites() {
  std::vector<Site> out;
  auto add_rule_sites = [&](const std::string& tag, const RewriteRule& r, const ExtendedCospan& g) {
    for (const auto& m : find_convex_matches(r, g)) out.push_back({tag + "/" + r.name, r, g, m});
  };
  auto fig2 = fixture_term("fig2.term");
  for (const auto& r : fig2_rules()) {
    add_rule_sites("fig2", r, fig2);
    add_rule_sites("fig2 lifted", lift_rule(r), fig2);
  }
  // every intermediate state of the fig2 run
  SaturationConfig cfg;
  cfg.rules = fig2_rules();
  cfg.max_iterations = kFig2Iterations;
  cfg.max_elements = kFig2Elements;
  auto run = saturate(fig2, cfg);
  for (const auto& r : fig2_rules()) add_rule_sites("fig2 saturated", lift_rule(r), run.graph);

  auto schema_sites = [&](const std::string& tag, SchemaId s, const ExtendedCospan& g) {
    for (auto anchor : find_schema_sites(g, s)) {
      auto inst = instantiate_schema(s, g, anchor);
      out.push_back({tag + "/" + to_string(s), inst.rule, g, inst.match});
    }
  };
  schema_sites("fig8", SchemaId::Beta, fixture_term("fig8.term"));
  schema_sites("fig4", SchemaId::Beta, fixture_term("fig4.term"));
  auto fig5 = fixture_term("fig5.term");
  for (auto s : all_schemas()) schema_sites("fig5", s, fig5);

  auto sig = population_signature();
  auto P = [&](const char* t) { return interpret(parse_term(t, sig)); };
  RewriteRule ff{"ff", P("f ; f"), P("f")};
  RewriteRule mf{"mf", P("m ; f"), P("(f * f) ; m")};
  for (const auto& t : enumerate_terms(sig, kPopulationNodes)) add_rule_sites("population", mf, interpret(t));
  for (const char* g : {"f ; f ; f", "(f ; f) + f", "(c * c) ; m ; f", "lam[A|A|A]{m ; f ; f}", "(m ; f) * (f ; f)"}) {
    add_rule_sites(g, ff, P(g));
    add_rule_sites(g, mf, P(g));
  }
  // a convex match whose deletion would remove an interface vertex
  auto exposed = P("f ; f");
  for (const auto& [v, t] : exposed.carrier.vertices())
    if (v != exposed.inputs.internal[0] && v != exposed.outputs.internal[0]) {
      exposed.outputs.internal.push_back(v);
      exposed.outputs.external.push_back(1);
      break;
    }
  add_rule_sites("exposed", ff, exposed);
  return out;
}

Line complement_uniqueness() {
  auto t0 = Clock::now();
  std::size_t sites = 0, bad = 0, with_complement = 0, capped = 0, candidates = 0;
  for (const auto& s : complement_sites()) {
    ++sites;
    auto bc = boundary_complement(s.rule, s.graph, s.match);
    std::optional<ExtendedCospan> built;
    if (bc.value) {
      built = bc.value->cospan;
      ++with_complement;
      audit().cospan("complement " + s.name, *built, true, bc.value->kind == ComplementCase::TopLevel);
    }
    auto search = search_complements(s.rule, s.graph, s.match, built);
    candidates += search.candidates;
    capped += search.capped;
    if (search.classes > 1 || !search.matches_constructed) {
      ++bad;
      std::cerr << "criterion 4 mismatch at " << s.name << ": " << search.classes << " classes, constructed "
                << (built ? "present" : "absent") << "\n";
    }
  }
  std::ostringstream d;
  d << sites - bad << "/" << sites << " matches have at most one complement up to iso, equal to the constructed one ("
    << with_complement << " with a complement, " << candidates << " candidates searched, " << capped
    << " with a fixed permutation, " << fmt_seconds(seconds_since(t0)) << ")";
  return {bad == 0 && sites > 0, d.str()};
}

std::string name_list(const std::vector<VertexId>& vs, const std::map<VertexId, std::string>& names) {
  std::string s = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ",";
    auto it = names.find(vs[i]);
    s += it == names.end() ? "?" + to_string(vs[i]) : it->second;
  }
  return s + "]";
}

Line fig8_beta() {
  auto g = fixture_term("fig8.term");
  auto expected = fixture_term("fig8.term", "expected");
  auto sites = find_schema_sites(g, SchemaId::Beta);
  if (sites.size() != 1) return {false, std::to_string(sites.size()) + " beta sites, expected 1"};
  auto inst = instantiate_schema(SchemaId::Beta, g, sites[0]);
  auto bc = boundary_complement(inst.rule, g, inst.match);
  if (!bc.value) return {false, "no complement: clause " + std::to_string(bc.failed_clause) + " " + bc.reason};
  auto out = apply_rewrite(g, inst.rule, inst.match);
  if (!out.result) return {false, "rewrite failed"};
  audit().cospan("fig8 result", *out.result);
  audit().cospan("fig8 complement", bc.value->cospan, true, false);

  // names from the outer box's ports and the source graph's externals
  EdgeId outer{};
  for (const auto& [e, d] : g.carrier.edges())
    if (d.kind == EdgeKind::LambdaBox && !g.carrier.parent(e)) outer = e;
  auto gi = box_ports(g, outer, Side::In), go = box_ports(g, outer, Side::Out);
  auto ge_in = g.inputs.external_vertices(), ge_out = g.outputs.external_vertices();
  if (gi.size() != 2 || go.size() != 1 || ge_in.size() != 1 || ge_out.size() != 1)
    return {false, "unexpected source interface shape"};
  std::map<VertexId, std::string> names{
      {ge_in[0], "u1"}, {ge_out[0], "u2"}, {gi[0], "v1"}, {gi[1], "v2"}, {go[0], "v3"}};

  const auto& c = bc.value->cospan;
  std::vector<VertexId> in_g(c.inputs.internal.begin(), c.inputs.internal.begin() + bc.value->inputs_from_g);
  std::vector<VertexId> out_g(c.outputs.internal.begin(), c.outputs.internal.begin() + bc.value->outputs_from_g);
  std::string in_text = name_list(in_g, names) + " + " + name_list(bc.value->c2, names);
  std::string out_text = name_list(out_g, names) + " + " + name_list(bc.value->c1, names);

  std::vector<VertexId> in_strict, out_strict;
  for (auto v : in_g)
    if (c.carrier.parent(v)) in_strict.push_back(v);
  for (auto v : out_g)
    if (c.carrier.parent(v)) out_strict.push_back(v);
  std::string strict_in = name_list(in_strict, names) + " + " + name_list(bc.value->c2, names);
  std::string strict_out = name_list(out_strict, names) + " + " + name_list(bc.value->c1, names);

  bool iso = find_cospan_iso(*out.result, expected).has_value();
  bool full = in_text == "[u1,v1,v2] + [v3]" && out_text == "[u2,v3] + [v1,v2]";
  bool strict = strict_in == "[v1,v2] + [v3]" && strict_out == "[v3] + [v1,v2]";
  std::ostringstream d;
  d << "result " << (iso ? "iso" : "NOT iso") << " to expected, " << to_string(out.kind) << " complement, inputs "
    << in_text << ", outputs " << out_text;
  return {iso && full && strict && out.kind == ComplementCase::Nested, d.str()};
}

Line fig2_saturation() {
  SaturationConfig cfg;
  cfg.rules = fig2_rules();
  cfg.max_iterations = kFig2Iterations;
  cfg.max_elements = kFig2Elements;
  auto res = saturate(fixture_term("fig2.term"), cfg);
  audit().cospan("fig2 saturated", res.graph);
  bool contains = contains_block_iso(res.graph, fixture_term("fig2.term", "a"));
  const auto& r = res.report;
  std::ostringstream d;
  d << (r.fixpoint ? "fixpoint" : "no fixpoint") << " after " << r.iterations << " iterations (limit "
    << kFig2Iterations << "), " << r.applications << " applications, " << r.final_elements << " elements (limit "
    << kFig2Elements << "), contains [[a]]: " << (contains ? "yes" : "no");
  return {r.fixpoint && r.iterations <= kFig2Iterations && r.final_elements <= kFig2Elements && contains, d.str()};
}

Line fig4_beta() {
  SaturationConfig cfg;
  cfg.schemas = {SchemaId::Beta};
  cfg.max_iterations = kFig4Iterations;
  cfg.max_elements = 2000;
  auto res = saturate(fixture_term("fig4.term"), cfg);
  audit().cospan("fig4 saturated", res.graph);
  bool contains = contains_block_iso(res.graph, fixture_term("fig4.term", "reduced"));
  std::size_t first = 0;
  for (const auto& e : res.report.trace)
    if (e.schema == SchemaId::Beta) {
      first = e.iteration;
      break;
    }
  std::ostringstream d;
  d << "beta applied in iteration " << first << ", " << res.report.iterations << " iterations (limit "
    << kFig4Iterations << "), reduced block present: " << (contains ? "yes" : "no");
  return {contains && first >= 1 && first <= kFig4Iterations, d.str()};
}

Line normal_form() {
  auto t0 = Clock::now();
  std::mt19937 rng(kSeed);
  auto sig = population_signature();
  std::size_t bad = 0, normal = 0, blocks = 0;
  for (std::size_t i = 0; i < kRandomTerms; ++i) {
    Term t = random_sum_term(rng, sig, kRandomNodes, kRandomJoins);
    auto g = interpret(t);
    audit().cospan("random sum term", g);
    auto res = saturate(g, SaturationConfig{});
    audit().cospan("normal form", res.graph);
    bool jn = is_join_normal(res.graph);
    normal += jn;
    std::vector<ExtendedCospan> summands;
    for (const auto& s : normal_form_sum(t)) {
      auto c = interpret(s);
      if (!any_iso(c, summands)) summands.push_back(c);
    }
    blocks += summands.size();
    auto expected = join_all(summands);
    bool iso = find_cospan_iso(res.graph, expected).has_value();
    if (!jn || !iso) {
      ++bad;
      if (bad <= 3)
        std::cerr << "criterion 8 failure on " << to_string(t) << ": join normal " << jn << ", iso " << iso << "\n";
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << kRandomTerms - bad << "/" << kRandomTerms << " random terms (seed " << kSeed << ") normalise to a join normal "
    << "graph iso to their summand join (" << normal << " join normal, " << blocks << " summands, "
    << fmt_seconds(s) << ", limit " << kNormalFormSeconds << " s)";
  return {bad == 0 && s < kNormalFormSeconds, d.str()};
}

Line validator_audit() {
  const auto& a = audit();
  for (const auto& l : a.log) std::cerr << "audit: " << l << "\n";
  std::ostringstream d;
  d << a.violations << " violations over " << a.graphs << " audited graphs";
  return {a.violations == 0 && a.graphs > 0, d.str()};
}

}  // namespace

int main() {
  report(1, "smc absorption", smc_absorption);
  report(2, "edpoi agrees with term rewriting", rewrite_agreement);
  report(3, "pushout universal property", pushout_universal);
  report(4, "boundary complement uniqueness", complement_uniqueness);
  report(5, "nested beta rewrite", fig8_beta);
  report(6, "shift-left saturation", fig2_saturation);
  report(7, "beta saturation", fig4_beta);
  report(8, "join normal form", normal_form);
  report(9, "validator audit", validator_audit);
  return failures == 0 ? 0 : 1;
}
