#include <benchmark/benchmark.h>

#include "egb/embed.hpp"
#include "egb/interp.hpp"
#include "egb/saturate.hpp"
#include "egb/text.hpp"

namespace {

using namespace egb;

const std::string fixtures = EGB_FIXTURES;

Term chain(const Signature& sig, int n) {
  std::string text = "f";
  for (int i = 1; i < n; ++i) text += " ; f";
  return parse_term(text, sig);
}

Signature chain_sig() {
  Signature s;
  s.add_base_type("A");
  s.add_op(OpSymbol{"f", {VertexType::base("A")}, {VertexType::base("A")}});
  return s;
}

void BM_InterpretChain(benchmark::State& state) {
  auto sig = chain_sig();
  Term t = chain(sig, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(interpret(t));
}
BENCHMARK(BM_InterpretChain)->Arg(8)->Arg(32)->Arg(128);

void BM_ConvexMatchesChain(benchmark::State& state) {
  auto sig = chain_sig();
  auto g = interpret(chain(sig, static_cast<int>(state.range(0))));
  auto lhs = interpret(parse_term("f ; f", sig));
  for (auto _ : state) benchmark::DoNotOptimize(find_convex_matches(lhs, g));
}
BENCHMARK(BM_ConvexMatchesChain)->Arg(8)->Arg(32)->Arg(128);

void BM_IsoChain(benchmark::State& state) {
  auto sig = chain_sig();
  auto g = interpret(chain(sig, static_cast<int>(state.range(0))));
  auto h = renumbered(g);
  for (auto _ : state) benchmark::DoNotOptimize(find_cospan_iso(g, h));
}
BENCHMARK(BM_IsoChain)->Arg(8)->Arg(32)->Arg(128);

void BM_SaturateFig2(benchmark::State& state) {
  auto doc = load_document(fixtures + "/fig2.term");
  auto rules = load_document(fixtures + "/fig2.rules", doc.signature);
  SaturationConfig cfg;
  cfg.max_iterations = 10;
  cfg.max_elements = 200;
  for (const auto& r : rules.rules) cfg.rules.push_back(RewriteRule{r.name, interpret(r.lhs), interpret(r.rhs)});
  auto g = interpret(*doc.find_term("main"));
  for (auto _ : state) benchmark::DoNotOptimize(saturate(g, cfg));
}
BENCHMARK(BM_SaturateFig2)->Unit(benchmark::kMillisecond);

void BM_SaturateFig4Beta(benchmark::State& state) {
  auto doc = load_document(fixtures + "/fig4.term");
  SaturationConfig cfg;
  cfg.max_iterations = 3;
  cfg.schemas = {SchemaId::Beta};
  auto g = interpret(*doc.find_term("main"));
  for (auto _ : state) benchmark::DoNotOptimize(saturate(g, cfg));
}
BENCHMARK(BM_SaturateFig4Beta)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
