#pragma once

#include "roughkit/fbm.hpp"
#include "roughkit/flows.hpp"
#include "roughkit/increments.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace roughkit {

/// Probabilists' Hermite polynomial He_k(x), 0 <= k <= 6.
double hermite(int k, double x);

/// Correlation of unit-variance fBm increments m steps apart:
/// (|m+1|^{2H} + |m-1|^{2H} - 2|m|^{2H}) / 2.
double alpha(long m, HurstParam hurst);

struct HermiteMoments {
  double mean;
  double variance;
};

/// Mean and variance of X~_K = sum_{n<K} |B_{t_{n+1}} - B_{t_n}|^4 for a
/// scalar fBm on a grid of step delta: mean 3K delta^{4H} and variance
/// delta^{8H} sum_{n1,n2} (24 alpha^4 + 72 alpha^2).
HermiteMoments hermite_moments(std::size_t K, HurstParam hurst, double delta);

/// S_K = sum_{n1,n2 <= K} (12 alpha^4 + alpha^2).
double s_k_sum(std::size_t K, HurstParam hurst);

/// Two time scales delta << Delta with Delta = r delta.
class TwoScale {
 public:
  TwoScale(double delta, long r);
  static TwoScale from_exponents(int delta_exp, int Delta_exp);  // delta = 2^-a, Delta = 2^-b

  double delta() const { return delta_; }
  double Delta() const { return delta_ * static_cast<double>(r_); }
  long r() const { return r_; }

 private:
  double delta_;
  long r_;
};

struct BlockStats {
  std::vector<double> X;  // fourth variation per block
  std::vector<double> Y;  // X^{1/4}
  double x_tilde;         // sum over all fine increments
  double mean;
  double variance;
};

/// Fourth variations X_N = sum_{n in block N} |B_{t_{n+1}} - B_{t_n}|^4 with
/// fine points t_n = n delta and blocks of r fine steps. Throws DomainError
/// if delta is not a multiple of the grid mesh.
BlockStats block_stats(const SamplePath& path, const TwoScale& scales);

/// r (d^2 + 2d) delta^{4H}: E[X_N] for a d-dimensional fBm.
double block_mean(const TwoScale& scales, HurstParam hurst, std::size_t d);

struct ConcentrationRow {
  double u;
  double frequency;
};

struct ConcentrationProfile {
  double mean;
  double scale;  // Delta^{1/2} delta^{4H - 1/2}
  std::vector<ConcentrationRow> rows;
  /// Slope of log(-log frequency) against log u over rows with 0 < freq < 1.
  std::optional<double> tail_exponent;
};

/// Frequencies of |X_N - E X_N| > scale * u over the given block samples.
ConcentrationProfile concentration_profile(const std::vector<double>& x_samples, const TwoScale& scales,
                                           HurstParam hurst, std::size_t d, const std::vector<double>& us);

struct InterpolationReport {
  double lhs;    // ||b||_alpha
  double rhs;    // 2^{1-alpha/rho} ||b||_inf^{1-alpha/rho} ||b||_rho^{alpha/rho}
  bool holds;
  double l1;     // trapezoid L^1 norm of |b|
  /// max over the eta grid of ||b||_{alpha,inf} / (eta ||b||_{rho,inf} + eta^{-1/(rho-alpha)} ||b||_{L1})
  double implied_constant;
};

InterpolationReport interpolation_check(const Increment1& b, double alpha_, double rho,
                                        const std::vector<double>& etas = {});

struct DichotomyRow {
  double eps;
  std::size_t count;
  std::size_t n;
  double frequency;
  double stderr_;
  /// No event observed: frequency < 3/n is all that can be said.
  bool upper_bound_only;
};

struct DichotomyTable {
  std::vector<DichotomyRow> rows;
  std::optional<double> exponent;  // fitted over rows with count > 0
  bool non_increasing;              // frequencies non-increasing as eps shrinks
};

struct DichotomyOptions {
  double q = 0.5;
  double gamma = 0.3;        // Hoelder exponent for y
  double alpha_ = 0.25;      // Hoelder exponent for z
  int steps = 64;
  std::size_t threads = 1;
};

/// Builds the table from per-path norms (|y|_{gamma,inf}, |z|_{alpha,inf}).
DichotomyTable dichotomy_table(const std::vector<double>& y_norms, const std::vector<double>& z_norms,
                               const std::vector<double>& eps_list, double q);

/// Monte-Carlo estimate of P(|y|_{gamma,inf} < eps, |z|_{alpha,inf} > eps^q)
/// with y_t = Z^U_t - Z^U_0 and z = (Z^{[V_j, U]})_j.
DichotomyTable norris_dichotomy_mc(const StrichartzRepresentation& rep, const PolyVectorField& u_field,
                                   const Eigen::VectorXd& eta, const FbmSampler& sampler, const Eigen::VectorXd& a,
                                   const std::vector<double>& eps_list, std::size_t n_paths, std::uint64_t seed,
                                   DichotomyOptions options = {});

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace roughkit
