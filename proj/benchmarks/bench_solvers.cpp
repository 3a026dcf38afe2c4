#include "roughkit/controlled.hpp"
#include "roughkit/densitylab.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/flows.hpp"
#include "roughkit/strichartz.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace roughkit;

namespace {

const SamplePath& driver() {
  static const SamplePath p = FbmSampler(HurstParam(0.4), TimeGrid(1.0, 257)).sample(3, 5, 0);
  return p;
}

}  // namespace

static void BM_DavieScheme(benchmark::State& state) {
  const FieldList f = yamato_fields();
  const auto d = std::make_shared<RoughDriver>(RoughDriver::piecewise_linear(driver()));
  for (auto _ : state) benchmark::DoNotOptimize(rde_solve(f, Eigen::VectorXd::Zero(3), d).values.data());
}
BENCHMARK(BM_DavieScheme)->Unit(benchmark::kMicrosecond);

static void BM_StrichartzSolve(benchmark::State& state) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rep.solve(driver(), Eigen::VectorXd::Zero(3), 1.0, steps).data());
}
BENCHMARK(BM_StrichartzSolve)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMicrosecond);

static void BM_JacobianPath(benchmark::State& state) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  const SamplePath p = FbmSampler(HurstParam(0.4), TimeGrid(1.0, 33)).sample(3, 5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_path(rep, p, Eigen::VectorXd::Zero(3), 64).J.size());
}
BENCHMARK(BM_JacobianPath)->Unit(benchmark::kMillisecond);

static void BM_MalliavinSlice(benchmark::State& state) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  const SamplePath p = FbmSampler(HurstParam(0.4), TimeGrid(1.0, 33)).sample(3, 5, 0);
  MalliavinOptions opt;
  opt.steps = 64;
  for (auto _ : state) benchmark::DoNotOptimize(malliavin_derivative(rep, p, Eigen::VectorXd::Zero(3), 1.0, opt).D.size());
}
BENCHMARK(BM_MalliavinSlice)->Unit(benchmark::kMillisecond);

static void BM_Kde(benchmark::State& state) {
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = std::sin(0.37 * static_cast<double>(k)) * std::cos(0.011 * k);
  for (auto _ : state) benchmark::DoNotOptimize(kde(xs).values.data());
}
BENCHMARK(BM_Kde)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
