#include "roughkit/norris.hpp"

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace roughkit {

double hermite(int k, double x) {
  if (k < 0 || k > 6) throw DomainError("hermite is tabulated for 0 <= k <= 6, got " + std::to_string(k));
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double alpha(long m, HurstParam hurst) {
  const double two_h = 2.0 * hurst.value();
  const double a = std::abs(static_cast<double>(m));
  return 0.5 * (std::pow(a + 1.0, two_h) + std::pow(std::abs(a - 1.0), two_h) - 2.0 * std::pow(a, two_h));
}

namespace {

// sum_{n1,n2 = 1..K} f(|n2 - n1|)
template <class F>
double toeplitz_sum(std::size_t K, F&& f) {
  double sum = static_cast<double>(K) * f(0);
  for (std::size_t m = 1; m < K; ++m) sum += 2.0 * static_cast<double>(K - m) * f(static_cast<long>(m));
  return sum;
}

}  // namespace

HermiteMoments hermite_moments(std::size_t K, HurstParam hurst, double delta) {
  if (K < 1) throw DomainError("hermite_moments needs K >= 1");
  if (!(delta > 0.0)) throw DomainError("step delta must be positive");
  const double scale = std::pow(delta, 4.0 * hurst.value());
  // G^4 = He_4(G) + 6 He_2(G) + 3 and E[He_k(U) He_l(V)] = k! rho^k 1{k=l}.
  const double var = toeplitz_sum(K, [&](long m) {
    const double a = alpha(m, hurst);
    return 24.0 * a * a * a * a + 72.0 * a * a;
  });
  return {3.0 * static_cast<double>(K) * scale, scale * scale * var};
}

double s_k_sum(std::size_t K, HurstParam hurst) {
  if (K < 1) throw DomainError("s_k_sum needs K >= 1");
  return toeplitz_sum(K, [&](long m) {
    const double a = alpha(m, hurst);
    return 12.0 * a * a * a * a + a * a;
  });
}

// ---------------------------------------------------------------------------

TwoScale::TwoScale(double delta, long r) : delta_(delta), r_(r) {
  if (!(delta > 0.0)) throw DomainError("fine scale delta must be positive");
  if (r < 2) throw DomainError("scale ratio Delta/delta must be an integer >= 2");
  if (delta * static_cast<double>(r) > 1.0 + 1e-12) throw DomainError("coarse scale Delta must not exceed 1");
}

TwoScale TwoScale::from_exponents(int delta_exp, int Delta_exp) {
  if (delta_exp <= Delta_exp) throw DomainError("need delta = 2^-a < Delta = 2^-b, i.e. a > b");
  return TwoScale(std::ldexp(1.0, -delta_exp), 1L << (delta_exp - Delta_exp));
}

BlockStats block_stats(const SamplePath& path, const TwoScale& scales) {
  const auto& grid = path.grid();
  const double ratio = scales.delta() / grid.mesh();
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
    throw DomainError("fine scale delta is not a multiple of the grid mesh");
  }
  const std::size_t fine = grid.steps() / stride;
  const auto r = static_cast<std::size_t>(scales.r());
  const std::size_t blocks = fine / r;
  if (blocks == 0) throw DomainError("grid horizon is shorter than one coarse block");
  BlockStats out{std::vector<double>(blocks, 0.0), {}, 0.0, 0.0, 0.0};
  for (std::size_t n = 0; n < fine; ++n) {
    const double sq = path.increment(n * stride, (n + 1) * stride).squaredNorm();
    const double q = sq * sq;
    out.x_tilde += q;
    if (n / r < blocks) out.X[n / r] += q;
  }
  out.Y.reserve(blocks);
  for (double x : out.X) out.Y.push_back(std::pow(x, 0.25));
  out.mean = std::accumulate(out.X.begin(), out.X.end(), 0.0) / static_cast<double>(blocks);
  if (blocks > 1) {
    double ss = 0.0;
    for (double x : out.X) ss += (x - out.mean) * (x - out.mean);
    out.variance = ss / static_cast<double>(blocks - 1);
  }
  return out;
}

double block_mean(const TwoScale& scales, HurstParam hurst, std::size_t d) {
  const double dd = static_cast<double>(d);
  return static_cast<double>(scales.r()) * (dd * dd + 2.0 * dd) * std::pow(scales.delta(), 4.0 * hurst.value());
}

ConcentrationProfile concentration_profile(const std::vector<double>& x_samples, const TwoScale& scales,
                                           HurstParam hurst, std::size_t d, const std::vector<double>& us) {
  if (x_samples.empty()) throw DomainError("concentration profile needs samples");
  const double h = hurst.value();
  ConcentrationProfile out{block_mean(scales, hurst, d),
                           std::sqrt(scales.Delta()) * std::pow(scales.delta(), 4.0 * h - 0.5), {}, std::nullopt};
  std::vector<double> lx, ly;
  for (double u : us) {
    std::size_t hits = 0;
    for (double x : x_samples)
      if (std::abs(x - out.mean) > out.scale * u) ++hits;
    const double f = static_cast<double>(hits) / static_cast<double>(x_samples.size());
    out.rows.push_back({u, f});
    if (f > 0.0 && f < 1.0 && u > 0.0) {
      lx.push_back(std::log(u));
      ly.push_back(std::log(-std::log(f)));
    }
  }
  if (lx.size() >= 2) out.tail_exponent = fit_slope(lx, ly);
  return out;
}

// ---------------------------------------------------------------------------

InterpolationReport interpolation_check(const Increment1& b, double alpha_, double rho, const std::vector<double>& etas) {
  if (!(0.0 < alpha_ && alpha_ < rho && rho < 1.0)) throw DomainError("need 0 < alpha < rho < 1");
  const double theta = alpha_ / rho;
  const double a_norm = holder_norm(b, alpha_);
  const double r_norm = holder_norm(b, rho);
  const double sup = sup_norm(b);
  InterpolationReport out{};
  out.lhs = a_norm;
  out.rhs = std::pow(2.0, 1.0 - theta) * std::pow(sup, 1.0 - theta) * std::pow(r_norm, theta);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  const auto& grid = b.grid();
  const auto& v = b.values();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    out.l1 += 0.5 * (grid[k + 1] - grid[k]) *
              (v.row(static_cast<Eigen::Index>(k)).norm() + v.row(static_cast<Eigen::Index>(k + 1)).norm());
  }
  const double a_inf = a_norm + sup;
  const double r_inf = r_norm + sup;
  for (double eta : etas) {
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    const double denom = eta * r_inf + std::pow(eta, -1.0 / (rho - alpha_)) * out.l1;
    if (denom > 0.0) out.implied_constant = std::max(out.implied_constant, a_inf / denom);
  }
  return out;
}

// ---------------------------------------------------------------------------

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

DichotomyTable dichotomy_table(const std::vector<double>& y_norms, const std::vector<double>& z_norms,
                               const std::vector<double>& eps_list, double q) {
  if (!(q > 0.0)) throw DomainError("exponent q must be positive");
  if (y_norms.size() != z_norms.size() || y_norms.empty()) throw DomainError("need one (y, z) norm pair per path");
  const std::size_t n = y_norms.size();
  DichotomyTable out{{}, std::nullopt, true};
  std::vector<double> lx, ly;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double zcut = std::pow(eps, q);
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (y_norms[k] < eps && z_norms[k] > zcut) ++count;
    const double f = static_cast<double>(count) / static_cast<double>(n);
    out.rows.push_back({eps, count, n, f, std::sqrt(f * (1.0 - f) / static_cast<double>(n)), count == 0});
    if (count > 0) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(f));
    }
  }
  // Rows sorted by decreasing eps for the monotonicity verdict.
  std::vector<DichotomyRow> sorted = out.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k].frequency > sorted[k - 1].frequency) out.non_increasing = false;
  if (lx.size() >= 2) out.exponent = fit_slope(lx, ly);
  return out;
}

DichotomyTable norris_dichotomy_mc(const StrichartzRepresentation& rep, const PolyVectorField& u_field,
                                   const Eigen::VectorXd& eta, const FbmSampler& sampler, const Eigen::VectorXd& a,
                                   const std::vector<double>& eps_list, std::size_t n_paths, std::uint64_t seed,
                                   DichotomyOptions options) {
  if (n_paths == 0) throw DomainError("norris_dichotomy_mc needs at least one path");
  std::vector<double> y_norms(n_paths), z_norms(n_paths);
  const std::size_t d = rep.driver_dim();
  parallel_for(n_paths, options.threads, [&](std::size_t k) {
    const SamplePath path = sampler.sample(d, seed, k);
    const JacobianPath jp = jacobian_path(rep, path, a, options.steps);
    const auto zu = z_process(jp, u_field, eta);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(zu.size()), 1);
    for (std::size_t i = 0; i < zu.size(); ++i) y(static_cast<Eigen::Index>(i), 0) = zu[i] - zu[0];
    Eigen::MatrixXd z(static_cast<Eigen::Index>(zu.size()), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      const auto zj = z_process(jp, bracket(rep.fields()[j], u_field), eta);
      for (std::size_t i = 0; i < zj.size(); ++i) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = zj[i];
    }
    y_norms[k] = holder_sup_norm(Increment1(path.grid(), std::move(y)), options.gamma);
    z_norms[k] = holder_sup_norm(Increment1(path.grid(), std::move(z)), options.alpha_);
  });
  return dichotomy_table(y_norms, z_norms, eps_list, options.q);
}

}  // namespace roughkit
