#include <benchmark/benchmark.h>

#include "zerocap/model.hpp"
#include "zerocap/quantities.hpp"

using namespace zerocap;

static void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto x = HermitianMatrix::identity({d, d, d});
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(x, {0, 2}));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4);

static void BM_KronPerm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto p = noiseless_quantum_graph(d).P;
  for (auto _ : state) benchmark::DoNotOptimize(kron_perm({p, p}, {0, 2, 1, 3}));
}
BENCHMARK(BM_KronPerm)->Arg(2)->Arg(3);

static void BM_UpsilonTwoStatePower(benchmark::State& state) {
  const NCGraph k = power(two_state_graph(std::sqrt(0.75)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(upsilon(k));
}
BENCHMARK(BM_UpsilonTwoStatePower)->Arg(1)->Arg(2);

static void BM_SigmaChannelDamping(benchmark::State& state) {
  const Channel n = amplitude_damping_channel(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_channel(n));
}
BENCHMARK(BM_SigmaChannelDamping);

static void BM_LovaszThetaCycle(benchmark::State& state) {
  const Graph g = cycle_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lovasz_theta(g));
}
BENCHMARK(BM_LovaszThetaCycle)->Arg(5)->Arg(7);

BENCHMARK_MAIN();
