#include <benchmark/benchmark.h>

#include <vector>

#include "bougerol/closedform.hpp"
#include "bougerol/functionals.hpp"
#include "bougerol/paths.hpp"
#include "bougerol/rng.hpp"
#include "bougerol/stats.hpp"

using namespace bougerol;

static void BM_PhiloxWord(benchmark::State& state) {
  Philox g(RngStream{1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(g());
}
BENCHMARK(BM_PhiloxWord);

static void BM_Normal(benchmark::State& state) {
  Philox g(RngStream{1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(g.normal());
}
BENCHMARK(BM_Normal);

static void BM_BrownianPath(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  Philox g(RngStream{2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sample_brownian_path(grid, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BrownianPath)->Arg(256)->Arg(4096);

static void BM_ExpFunctional(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  Philox g(RngStream{3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sample_exp_functional(grid, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExpFunctional)->Arg(256)->Arg(4096);

static void BM_DensityA(benchmark::State& state) {
  double v = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_A(1.0, v));
    v = v < 5.0 ? v + 0.049 : 0.1;
  }
}
BENCHMARK(BM_DensityA);

static SampleSet normal_sample(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Philox g(RngStream{seed, 0});
  SampleSet s(dim, "bench");
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dim == 1) s.push(g.normal());
    else s.push(g.normal(), g.normal());
  }
  return s;
}

static void BM_KsTwoSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = normal_sample(n, 1, 4), b = normal_sample(n, 1, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b));
}
BENCHMARK(BM_KsTwoSample)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_EcdfGrid(benchmark::State& state) {
  const auto a = normal_sample(100000, 2, 6), b = normal_sample(100000, 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(ecdf_grid_compare(a, b, pooled_quantile_grid(a, b)));
}
BENCHMARK(BM_EcdfGrid)->Unit(benchmark::kMillisecond);

static void BM_EnergyPerm(benchmark::State& state) {
  const auto a = normal_sample(1000, 2, 8), b = normal_sample(1000, 2, 9);
  for (auto _ : state) benchmark::DoNotOptimize(energy_perm_test(a, b, RngStream{10, 0}));
}
BENCHMARK(BM_EnergyPerm)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
