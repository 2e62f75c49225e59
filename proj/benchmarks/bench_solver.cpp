#include <benchmark/benchmark.h>

#include "rpkep/generators.hpp"
#include "rpkep/mechanisms.hpp"

using namespace rpkep;

namespace {

Pool make_pool(int pairs_per_agent, int agents, double arc_prob, std::uint64_t seed) {
  gen::DensityParams p;
  p.agent_pool_sizes.assign(static_cast<std::size_t>(agents), pairs_per_agent);
  p.arc_prob = arc_prob;
  return Pool(gen::generate_density(p, seed));
}

void BM_enumerate(benchmark::State& state) {
  gen::DensityParams p;
  p.agent_pool_sizes = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  p.arc_prob = 0.4;
  const Instance inst = gen::generate_density(p, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_exchanges(inst));
}
BENCHMARK(BM_enumerate)->Arg(8)->Arg(12)->Arg(16);

void BM_social_optimum(benchmark::State& state) {
  const Pool pool = make_pool(static_cast<int>(state.range(0)), 2, 0.4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mech::solve_social_optimum(pool));
}
BENCHMARK(BM_social_optimum)->Arg(8)->Arg(12)->Arg(16);

void BM_maxint(benchmark::State& state) {
  const Pool pool = make_pool(static_cast<int>(state.range(0)), 2, 0.4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mech::solve_maxint(pool));
}
BENCHMARK(BM_maxint)->Arg(8)->Arg(12);

void BM_maxrp_row_generation(benchmark::State& state) {
  const Pool pool = make_pool(static_cast<int>(state.range(0)), 2, 0.4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mech::solve_maxrp(pool));
}
BENCHMARK(BM_maxrp_row_generation)->Arg(8)->Arg(12);

void BM_saidman_generation(benchmark::State& state) {
  gen::SaidmanConfig cfg;
  cfg.agent_pool_sizes = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen::generate_saidman_like(cfg, seed++));
}
BENCHMARK(BM_saidman_generation)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
