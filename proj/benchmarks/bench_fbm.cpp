#include "roughkit/fbm.hpp"

#include <benchmark/benchmark.h>

using namespace roughkit;

static void BM_FactorizeCovariance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    FbmSampler sampler(HurstParam(0.4), TimeGrid(1.0, n));
    benchmark::DoNotOptimize(sampler.factor().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FactorizeCovariance)->RangeMultiplier(2)->Range(65, 1025)->Complexity(benchmark::oNCubed)
    ->Unit(benchmark::kMillisecond);

static void BM_SamplePath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FbmSampler sampler(HurstParam(0.4), TimeGrid(1.0, n));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(2, 1, k++).values().data());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplePath)->RangeMultiplier(4)->Range(65, 4097)->Unit(benchmark::kMicrosecond);

static void BM_KernelCovariance(benchmark::State& state) {
  const HurstParam h(0.4);
  const double c = calibrated_c_h(h);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_covariance(0.3, 0.8, h, c));
}
BENCHMARK(BM_KernelCovariance)->Unit(benchmark::kMillisecond);
