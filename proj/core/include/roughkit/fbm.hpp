#pragma once

#include "roughkit/grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace roughkit {

/// fBm covariance R_H(s, t) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
/// Throws DomainError for negative times.
double covariance(double s, double t, HurstParam hurst);

struct FbmOptions {
  std::size_t max_points = 4097;  // dense Cholesky cap
  std::size_t threads = 1;        // 0 = hardware concurrency
};

/// Exact sampler for d-dimensional fBm on a uniform grid.
///
/// The covariance of (B_{t_1}, ..., B_{t_{n-1}}) is factorised once by a
/// dense Cholesky decomposition; if the factorisation fails, a diagonal
/// jitter eps * I is added with eps escalating 1e-14, 1e-13, ..., 1e-10
/// before a FactorizationError is raised. Component c of path k draws its
/// standard normals from the counter stream (seed, k, c), so the result
/// is bitwise reproducible and independent of the thread count.
class FbmSampler {
 public:
  FbmSampler(HurstParam hurst, TimeGrid grid, FbmOptions options = {});

  HurstParam hurst() const { return hurst_; }
  const TimeGrid& grid() const { return grid_; }
  /// Jitter that was needed to factorise the covariance (0 if none).
  double jitter() const { return jitter_; }
  /// Lower-triangular factor of the covariance on t_1..t_{n-1}.
  const Eigen::MatrixXd& factor() const { return factor_; }

  SamplePath sample(std::size_t dim, std::uint64_t seed, std::size_t path_index) const;
  std::vector<SamplePath> sample_many(std::size_t dim, std::size_t n_paths, std::uint64_t seed) const;

 private:
  HurstParam hurst_;
  TimeGrid grid_;
  FbmOptions options_;
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
};

std::vector<SamplePath> sample_fbm(HurstParam hurst, const TimeGrid& grid, std::size_t dim,
                                   std::size_t n_paths, std::uint64_t seed, FbmOptions options = {});

// ---------------------------------------------------------------------------
// Volterra kernel representation B_t = int_0^t K_H(t, u) dW_u.

/// Inner integral int_u^t v^{H-3/2} (v-u)^{H-1/2} dv: an incomplete beta
/// function for H < 1/2, tanh-sinh quadrature otherwise (relative tolerance
/// 1e-8; NumericError on non-convergence).
double kernel_inner_integral(double t, double u, HurstParam hurst);

/// K_H(t, u) with normalising constant c_h; returns 0 unless 0 < u < t.
double kernel_K(double t, double u, HurstParam hurst, double c_h);

/// int_0^{min(s,t)} K_H(t, r) K_H(s, r) dr for a given constant c_h.
double kernel_covariance(double s, double t, HurstParam hurst, double c_h);

/// c_H calibrated so that int_0^1 K_H(1, r)^2 dr = 1. Cached per H.
double calibrated_c_h(HurstParam hurst);

}  // namespace roughkit
