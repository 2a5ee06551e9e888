#include <benchmark/benchmark.h>

#include "ess_sense/bayes_factor.hpp"
#include "ess_sense/ess.hpp"
#include "ess_sense/search.hpp"
#include "ess_sense/synthetic.hpp"

namespace {

using namespace ess_sense;

const Dataset& tictac() {
  static const Dataset d = tic_tac_toe_endgame();
  return d;
}

void BM_FamilyCounts(benchmark::State& state) {
  const auto& d = tictac();
  const std::vector<int> parents{0, 1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(family_counts(d, 9, parents));
}
BENCHMARK(BM_FamilyCounts);

void BM_BdeuFamilyScore(benchmark::State& state) {
  const auto fc = family_counts(tictac(), 9, std::vector<int>{0, 1, 2, 3});
  const BdeuHyper h(60.0);
  for (auto _ : state) benchmark::DoNotOptimize(bdeu_family_score(fc, h));
}
BENCHMARK(BM_BdeuFamilyScore);

void BM_BuildCache(benchmark::State& state) {
  SearchOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_cache(tictac(), Criterion::bdeu(60.0), opts));
}
BENCHMARK(BM_BuildCache)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExactDp(benchmark::State& state) {
  const auto cache = build_cache(tictac(), Criterion::bdeu(60.0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_dp_map(cache));
}
BENCHMARK(BM_ExactDp)->Unit(benchmark::kMillisecond);

void BM_HillClimb(benchmark::State& state) {
  const auto& d = tictac();
  for (auto _ : state) benchmark::DoNotOptimize(hill_climb(d, Criterion::bdeu(60.0), Dag(d.num_vars())));
}
BENCHMARK(BM_HillClimb)->Unit(benchmark::kMillisecond);

void BM_AlphaStar(benchmark::State& state) {
  const auto& d = tictac();
  const auto g = bic_init(d);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_star(d, g));
}
BENCHMARK(BM_AlphaStar);

void BM_ExactLogBf(benchmark::State& state) {
  const auto pc = pair_counts(tictac(), 9, 4, std::vector<int>{0, 8});
  const BdeuHyper h(1e3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_log_bf(pc, h));
}
BENCHMARK(BM_ExactLogBf);

}  // namespace
