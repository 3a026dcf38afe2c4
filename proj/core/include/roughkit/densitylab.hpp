#pragma once

#include "roughkit/fbm.hpp"
#include "roughkit/liefields.hpp"
#include "roughkit/strichartz.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace roughkit {

/// A_1 = 0, A_2 = d/dx1 + 2 x2 d/dx3, A_3 = d/dx2 - 2 x1 d/dx3 on R^3.
FieldList yamato_fields();

/// Closed-form solution driven by the piecewise-linear lift of a 3-d path
/// (component 1 unused):
/// y1 = a1 + B^2, y2 = a2 + B^3,
/// y3 = a3 + 2 a2 B^2 - 2 a1 B^3 + 2 (S^{32} - S^{23}).
/// Throws DomainError unless the path is 3-dimensional.
Eigen::VectorXd yamato_explicit(const SamplePath& path, const Eigen::VectorXd& initial, double t);

struct DensityEstimate {
  std::vector<double> x;
  std::vector<double> values;
  double bandwidth;
  std::size_t n_samples;

  /// Trapezoid integral over the evaluation grid.
  double mass() const;
};

struct KdeOptions {
  std::optional<double> bandwidth;  // Silverman's rule when empty
  std::size_t grid_points = 512;
  /// Evaluation range; defaults to [min - 4h, max + 4h].
  std::optional<std::pair<double, double>> range;
};

/// Gaussian kernel density estimate. Throws DomainError for fewer than 100
/// samples and NumericError if the samples have zero spread (an atom).
DensityEstimate kde(const std::vector<double>& samples, KdeOptions options = {});

/// Silverman's rule 1.06 sigma n^{-1/5}.
double silverman_bandwidth(const std::vector<double>& samples);

/// sup |F_a - F_b| between two empirical laws.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// sup |F_n - F| against a continuous cdf.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

struct SampleMoments {
  double mean;
  double variance;
  double skewness;
  double skewness_stderr;  // sqrt((k6 - 6 k4 + 9) / n), standardised sample moments
};
SampleMoments sample_moments(const std::vector<double>& samples);

using ExplicitSolution = std::function<Eigen::VectorXd(const SamplePath&, const Eigen::VectorXd&, double)>;

struct DensityOptions {
  Eigen::VectorXd initial;        // defaults to the origin
  std::size_t grid_points = 65;   // driver grid on [0, t]
  int steps = 64;                 // RK4 steps of the exponential flow
  std::size_t max_order = 5;      // largest nilpotency order tried
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  KdeOptions kde;
  ExplicitSolution explicit_solution;  // enables the KS comparison
};

struct SmoothnessProxy {
  double max_first_difference;
  double max_second_difference;
};

struct DensityReport {
  std::size_t nilpotency_order;
  std::size_t hormander_rank;
  std::vector<double> samples;
  DensityEstimate estimate;
  SmoothnessProxy proxy;          // on all samples
  SmoothnessProxy proxy_half;     // on the first half
  double proxy_change_first;      // relative change half -> full
  double proxy_change_second;
  SampleMoments moments;
  std::optional<double> ks_explicit;  // KS(solver, explicit) on independent paths
};

/// Monte-Carlo law of <functional, y_t> via the Strichartz solver, with a
/// KDE and smoothness proxies. Refuses with HypothesisError (naming the
/// failed hypothesis) unless the fields are nilpotent, have constant
/// brackets of order >= 2 and span R^m at the initial point and at fixed
/// probe points.
DensityReport density_report(const FieldList& fields, HurstParam hurst, double t, std::size_t n_paths,
                             const Eigen::VectorXd& functional, DensityOptions options = {});

/// Checks the three hypotheses; returns (order, rank) or throws HypothesisError.
std::pair<std::size_t, std::size_t> check_density_hypotheses(const FieldList& fields, const Eigen::VectorXd& initial,
                                                             std::size_t max_order);

}  // namespace roughkit
