#include "roughkit/densitylab.hpp"

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace roughkit {

FieldList yamato_fields() {
  return {
      PolyVectorField::parse({"0", "0", "0"}),
      PolyVectorField::parse({"1", "0", "2*x2"}),
      PolyVectorField::parse({"0", "1", "-2*x1"}),
  };
}

Eigen::VectorXd yamato_explicit(const SamplePath& path, const Eigen::VectorXd& initial, double t) {
  if (path.dim() != 3) throw DomainError("the Yamato system is driven by a 3-dimensional path");
  if (initial.size() != 3) throw DomainError("the Yamato system lives in R^3");
  const std::size_t k = path.grid().index_of(t);
  if (k == 0) return initial;
  const IteratedIntegrals sig = path_signature_indices(path, 0, k, 2);
  const double b2 = sig[Word{1}];
  const double b3 = sig[Word{2}];
  const double s32 = sig[Word{2, 1}];
  const double s23 = sig[Word{1, 2}];
  Eigen::VectorXd y(3);
  y(0) = initial(0) + b2;
  y(1) = initial(1) + b3;
  y(2) = initial(2) + 2.0 * initial(1) * b2 - 2.0 * initial(0) * b3 + 2.0 * (s32 - s23);
  return y;
}

// ---------------------------------------------------------------------------

double DensityEstimate::mass() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) m += 0.5 * (x[k + 1] - x[k]) * (values[k] + values[k + 1]);
  return m;
}

SampleMoments sample_moments(const std::vector<double>& samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 3) throw DomainError("sample moments need at least 3 samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0, m6 = 0.0;
  for (double s : samples) {
    const double c = s - mean, c2 = c * c;
    m2 += c2;
    m3 += c2 * c;
    m4 += c2 * c2;
    m6 += c2 * c2 * c2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m6 /= n;
  if (!(m2 > 0.0)) return {mean, 0.0, 0.0, 0.0};
  // Delta-method variance of the skewness for a symmetric law: (k6 - 6 k4 + 9) / n
  // in standardised moments; equals 6 / n for a Gaussian.
  const double k4 = m4 / (m2 * m2), k6 = m6 / (m2 * m2 * m2);
  return {mean, m2 * n / (n - 1.0), m3 / std::pow(m2, 1.5), std::sqrt(std::max(k6 - 6.0 * k4 + 9.0, 0.0) / n)};
}

double silverman_bandwidth(const std::vector<double>& samples) {
  const double sigma = std::sqrt(sample_moments(samples).variance);
  if (!(sigma > 0.0)) throw NumericError("samples have zero spread: the law has an atom");
  return 1.06 * sigma * std::pow(static_cast<double>(samples.size()), -0.2);
}

DensityEstimate kde(const std::vector<double>& samples, KdeOptions options) {
  if (samples.size() < 100) throw DomainError("kde needs at least 100 samples, got " + std::to_string(samples.size()));
  if (options.grid_points < 2) throw DomainError("kde needs at least two evaluation points");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  if (*lo_it == *hi_it) throw NumericError("samples have zero spread: the law has an atom");
  const double h = options.bandwidth ? *options.bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  const double lo = options.range ? options.range->first : *lo_it - 4.0 * h;
  const double hi = options.range ? options.range->second : *hi_it + 4.0 * h;
  if (!(hi > lo)) throw DomainError("empty kde range");

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  DensityEstimate out{{}, {}, h, samples.size()};
  out.x.resize(options.grid_points);
  out.values.resize(options.grid_points);
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  const double cutoff = 9.0 * h;  // exp(-40.5) is below double resolution of the sum
  for (std::size_t k = 0; k < options.grid_points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(options.grid_points - 1);
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
    auto last = std::upper_bound(first, sorted.end(), x + cutoff);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    out.x[k] = x;
    out.values[k] = sum * norm;
  }
  return out;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS distance needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double f = cdf(samples[k]);
    worst = std::max({worst, std::abs(static_cast<double>(k + 1) / n - f), std::abs(f - static_cast<double>(k) / n)});
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::pair<std::size_t, std::size_t> check_density_hypotheses(const FieldList& fields, const Eigen::VectorXd& initial,
                                                             std::size_t max_order) {
  const std::size_t m = state_dim(fields);
  std::size_t order = 0;
  for (std::size_t n = 2; n <= max_order; ++n) {
    if (is_nilpotent(fields, n)) {
      order = n;
      break;
    }
  }
  if (order == 0) {
    throw HypothesisError("nilpotency", "no bracket order up to " + std::to_string(max_order) + " vanishes");
  }
  if (order >= 3 && !constant_brackets(fields, order - 1)) {
    throw HypothesisError("constant brackets", "a bracket of order >= 2 has positive degree");
  }
  const std::size_t up_to = std::max<std::size_t>(1, order - 1);
  std::vector<Eigen::VectorXd> probes{initial};
  for (int k = 1; k <= 4; ++k) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = std::sin(1.7 * k + 0.9 * static_cast<double>(i)) * k;
    probes.push_back(p);
  }
  std::size_t rank = m;
  for (const auto& p : probes) rank = std::min(rank, hormander_rank(fields, p, up_to));
  if (rank < m) {
    throw HypothesisError("hormander", "brackets span a space of dimension " + std::to_string(rank) + " < " +
                                           std::to_string(m));
  }
  return {order, rank};
}

namespace {

SmoothnessProxy proxy_of(const DensityEstimate& e) {
  SmoothnessProxy p{0.0, 0.0};
  const double dx = e.x[1] - e.x[0];
  for (std::size_t k = 0; k + 1 < e.values.size(); ++k)
    p.max_first_difference = std::max(p.max_first_difference, std::abs(e.values[k + 1] - e.values[k]) / dx);
  for (std::size_t k = 1; k + 1 < e.values.size(); ++k) {
    const double second = (e.values[k + 1] - 2.0 * e.values[k] + e.values[k - 1]) / (dx * dx);
    p.max_second_difference = std::max(p.max_second_difference, std::abs(second));
  }
  return p;
}

double relative_change(double from, double to) {
  return std::abs(to - from) / std::max(std::abs(to), 1e-300);
}

}  // namespace

DensityReport density_report(const FieldList& fields, HurstParam hurst, double t, std::size_t n_paths,
                             const Eigen::VectorXd& functional, DensityOptions options) {
  const std::size_t m = state_dim(fields);
  if (options.initial.size() == 0) options.initial = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (static_cast<std::size_t>(functional.size()) != m) throw DomainError("functional has the wrong dimension");
  if (static_cast<std::size_t>(options.initial.size()) != m) throw DomainError("initial point has the wrong dimension");
  if (n_paths < 200) throw DomainError("density_report needs at least 200 paths");

  const auto [order, rank] = check_density_hypotheses(fields, options.initial, options.max_order);
  const StrichartzRepresentation rep(fields, order);
  const FbmSampler sampler(hurst, TimeGrid(t, options.grid_points), FbmOptions{4097, options.threads});

  DensityReport out{};
  out.nilpotency_order = order;
  out.hormander_rank = rank;
  out.samples.resize(n_paths);
  parallel_for(n_paths, options.threads, [&](std::size_t k) {
    const SamplePath path = sampler.sample(fields.size(), options.seed, k);
    out.samples[k] = functional.dot(rep.solve(path, options.initial, t, options.steps));
  });

  out.estimate = kde(out.samples, options.kde);
  KdeOptions half_opts = options.kde;
  half_opts.range = std::make_pair(out.estimate.x.front(), out.estimate.x.back());
  const std::vector<double> half(out.samples.begin(), out.samples.begin() + static_cast<std::ptrdiff_t>(n_paths / 2));
  half_opts.bandwidth = options.kde.bandwidth;
  const DensityEstimate half_est = kde(half, half_opts);
  out.proxy = proxy_of(out.estimate);
  out.proxy_half = proxy_of(half_est);
  out.proxy_change_first = relative_change(out.proxy_half.max_first_difference, out.proxy.max_first_difference);
  out.proxy_change_second = relative_change(out.proxy_half.max_second_difference, out.proxy.max_second_difference);
  out.moments = sample_moments(out.samples);

  if (options.explicit_solution) {
    // Independent driver streams: path indices n_paths .. 2 n_paths - 1.
    std::vector<double> reference(n_paths);
    parallel_for(n_paths, options.threads, [&](std::size_t k) {
      const SamplePath path = sampler.sample(fields.size(), options.seed, n_paths + k);
      reference[k] = functional.dot(options.explicit_solution(path, options.initial, t));
    });
    out.ks_explicit = ks_two_sample(out.samples, reference);
  }
  return out;
}

}  // namespace roughkit
