#include "roughkit/fbm.hpp"

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"
#include "roughkit/rng.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace roughkit {

double covariance(double s, double t, HurstParam hurst) {
  if (s < 0.0 || t < 0.0) {
    throw DomainError("fBm covariance is defined for non-negative times only");
  }
  const double two_h = 2.0 * hurst.value();
  return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

FbmSampler::FbmSampler(HurstParam hurst, TimeGrid grid, FbmOptions options)
    : hurst_(hurst), grid_(grid), options_(options) {
  if (grid_.size() > options_.max_points) {
    throw DomainError("grid has " + std::to_string(grid_.size()) +
                      " points, above the dense Cholesky cap of " +
                      std::to_string(options_.max_points));
  }
  const auto n = static_cast<Eigen::Index>(grid_.size() - 1);
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = grid_[static_cast<std::size_t>(i + 1)];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = covariance(ti, grid_[static_cast<std::size_t>(j + 1)], hurst_);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double eps = 1e-14;
  while (llt.info() != Eigen::Success) {
    if (eps > 1e-10 * 1.0000001) {
      throw FactorizationError("fBm covariance is not positive definite on " +
                               std::to_string(grid_.size()) + " points (H = " +
                               std::to_string(hurst_.value()) +
                               ") even with jitter 1e-10 * I");
    }
    jitter_ = eps;
    llt.compute(cov + eps * Eigen::MatrixXd::Identity(n, n));
    eps *= 10.0;
  }
  factor_ = llt.matrixL();
}

SamplePath FbmSampler::sample(std::size_t dim, std::uint64_t seed, std::size_t path_index) const {
  if (dim < 1) throw DomainError("fBm dimension must be at least 1");
  const auto n = factor_.rows();
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n + 1, static_cast<Eigen::Index>(dim));
  Eigen::VectorXd noise(n);
  for (std::size_t c = 0; c < dim; ++c) {
    CounterRng rng(seed, static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(c));
    for (Eigen::Index i = 0; i < n; ++i) noise(i) = rng.normal();
    values.col(static_cast<Eigen::Index>(c)).tail(n).noalias() =
        factor_.triangularView<Eigen::Lower>() * noise;
  }
  return SamplePath(grid_, std::move(values), hurst_, seed);
}

std::vector<SamplePath> FbmSampler::sample_many(std::size_t dim, std::size_t n_paths,
                                                std::uint64_t seed) const {
  std::vector<std::optional<SamplePath>> slots(n_paths);
  parallel_for(n_paths, options_.threads, [&](std::size_t k) { slots[k] = sample(dim, seed, k); });
  std::vector<SamplePath> out;
  out.reserve(n_paths);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<SamplePath> sample_fbm(HurstParam hurst, const TimeGrid& grid, std::size_t dim,
                                   std::size_t n_paths, std::uint64_t seed, FbmOptions options) {
  return FbmSampler(hurst, grid, options).sample_many(dim, n_paths, seed);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kQuadTolerance = 1e-8;

// int_u^{u+gap} v^{H-3/2} (v-u)^{H-1/2} dv. With v = u / x this is
// u^{2H-1} int_{u/(u+gap)}^1 x^{-2H} (1-x)^{H-1/2} dx, an incomplete beta
// function for H < 1/2.
double inner_integral(double u, double gap, double h) {
  const double x0 = u / (u + gap);
  const double scale = std::pow(u, 2.0 * h - 1.0);
  if (h < 0.5) {
    const double a = 1.0 - 2.0 * h;
    const double b = h + 0.5;
    return scale * boost::math::beta(a, b) * boost::math::ibetac(a, b, x0);
  }
  auto integrand = [&](double x) { return std::pow(x, -2.0 * h) * std::pow(1.0 - x, h - 0.5); };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(integrand, x0, 1.0, kQuadTolerance, &error, &l1);
  if (!std::isfinite(value) || error > 1e3 * kQuadTolerance * l1) {
    throw NumericError("kernel quadrature did not converge at (u, gap) = (" + std::to_string(u) + ", " +
                       std::to_string(gap) + ")");
  }
  return scale * value;
}

// K_H(t, u) / c_H; the gap t - u is passed separately.
double unit_kernel(double t, double u, double gap, double h) {
  if (!(u > 0.0) || !(gap > 0.0)) return 0.0;
  const double first = std::pow(u / t, 0.5 - h) * std::pow(gap, h - 0.5);
  if (h == 0.5) return first;
  return first + (0.5 - h) * std::pow(u, 0.5 - h) * inner_integral(u, gap, h);
}

}  // namespace

double kernel_inner_integral(double t, double u, HurstParam hurst) {
  if (!(u > 0.0) || !(u < t)) return 0.0;
  return inner_integral(u, t - u, hurst.value());
}

double kernel_K(double t, double u, HurstParam hurst, double c_h) {
  if (!(u > 0.0) || !(u < t)) return 0.0;
  return c_h * unit_kernel(t, u, t - u, hurst.value());
}

double kernel_covariance(double s, double t, HurstParam hurst, double c_h) {
  if (s < 0.0 || t < 0.0) throw DomainError("kernel covariance needs non-negative times");
  if (s > t) std::swap(s, t);
  if (s == 0.0) return 0.0;
  const double h = hurst.value();
  // Two-argument form: `xc` is the signed distance to the nearest endpoint,
  // negative near 0 and positive near s.
  auto integrand = [&](double r, double xc) {
    const double to_upper = xc > 0.0 ? xc : s - r;
    return unit_kernel(t, r, (t - s) + to_upper, h) * unit_kernel(s, r, to_upper, h);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(integrand, 0.0, s, kQuadTolerance, &error, &l1);
  if (!std::isfinite(value) || error > 1e3 * kQuadTolerance * l1) {
    throw NumericError("kernel covariance quadrature did not converge");
  }
  return c_h * c_h * value;
}

double calibrated_c_h(HurstParam hurst) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(hurst.value()); it != cache.end()) return it->second;
  }
  const double c = 1.0 / std::sqrt(kernel_covariance(1.0, 1.0, hurst, 1.0));
  std::lock_guard lock(mutex);
  cache.emplace(hurst.value(), c);
  return c;
}

}  // namespace roughkit
