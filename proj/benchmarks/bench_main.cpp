#include <benchmark/benchmark.h>

#include <random>

#include "cspimp/groebner.hpp"
#include "cspimp/imp.hpp"
#include "generate.hpp"

using namespace cspimp;

namespace {

const MonomialOrder grlex = MonomialOrder::grlex();

void BM_ChainTwoTerms(benchmark::State& state) {
  gen::Generated g = gen::degree_chain(static_cast<std::size_t>(state.range(0)));
  GeneratorSet gs = encode_max(g.instance, g.language);
  for (auto _ : state) benchmark::DoNotOptimize(autoreduce(buchberger(gs, grlex, Strategy::twoterms, {})));
}
BENCHMARK(BM_ChainTwoTerms)->DenseRange(5, 11, 2)->Unit(benchmark::kMillisecond);

void BM_ChainGeneric(benchmark::State& state) {
  gen::Generated g = gen::degree_chain(static_cast<std::size_t>(state.range(0)));
  GeneratorSet gs = encode_max(g.instance, g.language);
  for (auto _ : state) benchmark::DoNotOptimize(autoreduce(buchberger(gs, grlex, Strategy::generic, {})));
}
BENCHMARK(BM_ChainGeneric)->DenseRange(5, 9, 2)->Unit(benchmark::kMillisecond);

void BM_TwoSatMajority(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  gen::Generated g = gen::random_clauses(n, 2 * n, ClauseShape::width2, 2, rng);
  GeneratorSet gs = encode_majority(g.instance, g.language);
  for (auto _ : state) benchmark::DoNotOptimize(buchberger(gs, grlex, Strategy::majority, {}));
}
BENCHMARK(BM_TwoSatMajority)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

void BM_HornTruncated(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto n = static_cast<std::size_t>(state.range(0));
  gen::Generated g = gen::random_clauses(n, 2 * n, ClauseShape::horn, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_basis(g.instance, g.language, TwoTermsKind::min, 2));
}
BENCHMARK(BM_HornTruncated)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

void BM_DecideHorn(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const auto n = static_cast<std::size_t>(state.range(0));
  gen::Generated g = gen::random_clauses(n, 2 * n, ClauseShape::horn, 3, rng);
  ImpQuery q{g.instance, g.language, Polynomial::variable(1) * Polynomial::variable(2) - Polynomial::variable(1),
             std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(decide(q));
}
BENCHMARK(BM_DecideHorn)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
