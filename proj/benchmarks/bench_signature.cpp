#include "roughkit/fbm.hpp"
#include "roughkit/increments.hpp"
#include "roughkit/signature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace roughkit;

static void BM_PathSignature(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const SamplePath p = FbmSampler(HurstParam(0.4), TimeGrid(1.0, 257)).sample(3, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(path_signature(p, 0.0, 1.0, level)[Word{0}]);
}
BENCHMARK(BM_PathSignature)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

static void BM_ChenConcat(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(3, 0.1, 0.3);
  const auto a = segment_signature(v, level, 0.0, 0.5), b = segment_signature(-v, level, 0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(chen_concat(a, b)[Word{0}]);
}
BENCHMARK(BM_ChenConcat)->DenseRange(2, 6, 2);

static void BM_Sewing(benchmark::State& state) {
  const double mu = 1.2;
  const TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
  const auto A = [mu](double s, double t) { return std::cos(3.0 * s) * std::pow(t - s, mu); };
  const Increment3 h(
      grid, 1, [A](double s, double u, double t) { return Eigen::VectorXd::Constant(1, A(s, t) - A(s, u) - A(u, t)); },
      true);
  SewingOptions opt;
  opt.depth = 10;
  opt.max_checked_quadruples = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(sewing(h, mu, opt).at(0, 1)(0));
}
BENCHMARK(BM_Sewing)->RangeMultiplier(2)->Range(17, 129)->Unit(benchmark::kMillisecond);
