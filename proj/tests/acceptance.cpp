// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "roughkit/controlled.hpp"
#include "roughkit/densitylab.hpp"
#include "roughkit/error.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/flows.hpp"
#include "roughkit/increments.hpp"
#include "roughkit/liefields.hpp"
#include "roughkit/norris.hpp"
#include "roughkit/rng.hpp"
#include "roughkit/signature.hpp"
#include "roughkit/strichartz.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace roughkit;

namespace {

// Pinned tolerances.
constexpr double kFbmSigmas = 3.0;
constexpr double kFbmSeconds = 30.0;
constexpr double kChenTol = 1e-13;
constexpr double kSewingSlack = 0.05;
constexpr double kSewingDeltaTol = 1e-10;
constexpr double kAreaSlopeTol = 0.1;
constexpr double kStrichartzTol = 1e-10;
constexpr double kRdeTol = 1e-4;
constexpr double kIsserlisTol = 1e-10;
constexpr double kHermiteSigmas = 3.0;
constexpr double kHermiteVarRel = 0.05;
constexpr double kSkStability = 0.10;
constexpr double kInverseTol = 1e-9;
constexpr double kFdTol = 1e-6;
constexpr double kFlowTol = 1e-8;
constexpr double kMalliavinTol = 1e-6;
constexpr double kKdeSupTol = 0.02;
constexpr double kSkewSigmas = 3.0;
constexpr double kKsTol = 0.01;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Outcome fbm_law() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = 10000;
  bool ok = true;
  std::ostringstream msg;
  for (double hv : {0.35, 0.40, 0.45}) {
    const FbmSampler sampler(HurstParam(hv), TimeGrid(1.0, 257));
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double b = sampler.sample(1, 1001, k).at(256)(0);
      s1 += b * b;
      s2 += b * b * b * b;
    }
    const double var = s1 / n, se = std::sqrt((s2 / n - var * var) / n);
    const double z = std::abs(var - 1.0) / se;  // T^{2H} = 1
    ok = ok && z <= kFbmSigmas;
    msg << "H=" << hv << " z=" << fmt("%.2f", z) << "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  msg << "runtime " << fmt("%.1f", secs) << " s";
  return {ok && secs < kFbmSeconds, msg.str()};
}

Outcome chen_identity() {
  double worst = 0.0;
  for (double hv : {0.35, 0.40, 0.45})
    for (std::size_t k = 0; k < 100; ++k)
      worst = std::max(worst, chen_defect_level2(FbmSampler(HurstParam(hv), TimeGrid(1.0, 65)).sample(3, 2002, k)));
  return {worst <= kChenTol, "300 paths, max defect " + fmt("%.3g", worst)};
}

Outcome sewing_theorem() {
  // Both norms are sups over grid triples; the discrete split norm of h
  // misses the smallest scales, so the ratio approaches the bound from above
  // as O(mesh). 257 points keep that bias below the slack.
  const double mu = 1.2;
  const TimeGrid grid(1.0, 257);
  SewingOptions opts;
  opts.depth = 14;
  opts.geometric_tail = true;
  double worst_ratio = 0.0, worst_delta = 0.0;
  for (std::size_t e = 0; e < 100; ++e) {
    CounterRng rng(3003, e, 0);
    const double a0 = rng.normal(), a1 = rng.normal(), w = 6.0 * rng.uniform(), ph = 6.3 * rng.uniform();
    const double b0 = rng.normal();
    // h = delta A with A_{st} = a(s) (t - s)^mu + b0 (t - s)^{mu + 1}, A in C^mu.
    const auto A = [=](double s, double t) {
      return (a0 + a1 * std::sin(w * s + ph)) * std::pow(t - s, mu) + b0 * std::pow(t - s, mu + 1.0);
    };
    const Increment3 h(
        grid, 1,
        [A](double s, double u, double t) { return Eigen::VectorXd::Constant(1, A(s, t) - A(s, u) - A(u, t)); }, true);
    const Increment2 L = sewing(h, mu, opts);
    worst_ratio = std::max(worst_ratio, holder_norm(L, mu) / split_norm(h, mu / 2, mu / 2));
    const Increment3 dL = delta2(L);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size(); ++j)
        for (std::size_t k = j + 1; k < grid.size(); ++k)
          worst_delta = std::max(worst_delta, std::abs(dL.at(i, j, k)(0) - h.at(i, j, k)(0)));
  }
  const double bound = sewing_constant(mu) + kSewingSlack;
  return {worst_ratio <= bound && worst_delta <= kSewingDeltaTol,
          "max ratio " + fmt("%.4f", worst_ratio) + " (bound " + fmt("%.4f", bound) + "), max |delta L - h| " +
              fmt("%.3g", worst_delta)};
}

Outcome levy_area_exponent() {
  const std::size_t n = 10000;
  bool ok = true;
  std::ostringstream msg;
  for (double hv : {0.35, 0.40, 0.45}) {
    const FbmSampler sampler(HurstParam(hv), TimeGrid(0.5, 513));
    std::vector<double> sums(6, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const SamplePath p = sampler.sample(2, 4004, k);
      for (int e = 1; e <= 6; ++e) sums[e - 1] += std::abs(levy_area(p, 0.0, std::ldexp(1.0, -e))(0, 1));
    }
    std::vector<double> lx, ly;
    for (int e = 1; e <= 6; ++e) {
      lx.push_back(std::log(std::ldexp(1.0, -e)));
      ly.push_back(std::log(sums[e - 1] / n));
    }
    const double slope = fit_slope(lx, ly);
    ok = ok && std::abs(slope - 2.0 * hv) <= kAreaSlopeTol;
    msg << "H=" << hv << " slope " << fmt("%.3f", slope) << "; ";
  }
  return {ok, msg.str()};
}

Outcome strichartz_exactness() {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  const FbmSampler sampler(HurstParam(0.4), TimeGrid::dyadic(1.0, 10));
  double strich = 0.0, rde = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    CounterRng rng(5005, k, 7);
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) a(i) = rng.normal();
    const SamplePath p = sampler.sample(3, 5005, k);
    const Eigen::VectorXd exact = yamato_explicit(p, a, 1.0);
    const Eigen::VectorXd s = rep.solve(p, a, 1.0);
    const RdeSolution sol = rde_solve(y, a, std::make_shared<const RoughDriver>(RoughDriver::piecewise_linear(p)));
    const Eigen::VectorXd r = sol.values.row(sol.values.rows() - 1).transpose();
    strich = std::max(strich, (s - exact).cwiseAbs().maxCoeff());
    rde = std::max({rde, (r - exact).cwiseAbs().maxCoeff(), (r - s).cwiseAbs().maxCoeff()});
  }
  return {strich <= kStrichartzTol && rde <= kRdeTol,
          "100 drivers, |strichartz - explicit| " + fmt("%.3g", strich) + ", |rde - both| " + fmt("%.3g", rde)};
}

PolyVectorField random_field(CounterRng& rng, std::size_t m, int max_degree) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < m; ++i) {
    Polynomial p(m);
    for (int t = 0; t < 3; ++t) {
      Exponents e(m, 0);
      int budget = static_cast<int>(rng.uniform() * (max_degree + 1));
      for (std::size_t v = 0; v < m && budget > 0; ++v) {
        const int take = static_cast<int>(rng.uniform() * (budget + 1));
        e[v] = take;
        budget -= take;
      }
      p.add_term(e, Rational(static_cast<int>(rng.uniform() * 9) - 4, 1 + static_cast<int>(rng.uniform() * 3)));
    }
    comps.push_back(p);
  }
  return PolyVectorField(comps);
}

Outcome lie_algebra() {
  const FieldList y = yamato_fields();
  bool ok = is_nilpotent(y, 3).nilpotent && constant_brackets(y, 2);
  std::size_t rank_hits = 0;
  CounterRng rng(6006, 0, 0);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x(i) = 10.0 * rng.uniform() - 5.0;
    if (hormander_rank(y, x, 3) == 3) ++rank_hits;
  }
  std::size_t algebra_hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_field(rng, 3, 3), b = random_field(rng, 3, 3), c = random_field(rng, 3, 3);
    const bool anti = (bracket(a, b) + bracket(b, a)).is_zero();
    const bool jacobi =
        (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))).is_zero();
    if (anti && jacobi) ++algebra_hits;
  }
  ok = ok && rank_hits == 10 && algebra_hits == 50;
  return {ok, "nilpotent(3) and constant brackets, rank 3 at " + std::to_string(rank_hits) +
                  "/10 points, antisymmetry+Jacobi on " + std::to_string(algebra_hits) + "/50 triples"};
}

double isserlis(const std::vector<int>& idx, const Eigen::MatrixXd& cov) {
  std::vector<bool> used(idx.size(), false);
  std::function<double()> rec = [&]() -> double {
    std::size_t first = 0;
    while (first < idx.size() && used[first]) ++first;
    if (first == idx.size()) return 1.0;
    used[first] = true;
    double total = 0.0;
    for (std::size_t k = first + 1; k < idx.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      total += cov(idx[first], idx[k]) * rec();
      used[k] = false;
    }
    used[first] = false;
    return total;
  };
  return rec();
}

Outcome hermite_statistics() {
  const HurstParam h(0.4);
  Eigen::MatrixXd cov(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cov(i, j) = alpha(i - j, h);
  double first = 0.0, second = 0.0;
  for (int i = 0; i < 3; ++i) {
    first += isserlis({i, i, i, i}, cov);
    for (int j = 0; j < 3; ++j) second += isserlis({i, i, i, i, j, j, j, j}, cov);
  }
  const HermiteMoments m3 = hermite_moments(3, h, 1.0);
  const double oracle_err = std::max(std::abs(m3.mean - first), std::abs(m3.variance - (second - first * first)));

  const std::size_t K = 8, n = 100000;
  const FbmSampler sampler(h, TimeGrid(static_cast<double>(K), K + 1));
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const SamplePath path = sampler.sample(1, 7007, p);
    double x = 0.0;
    for (std::size_t k = 0; k < K; ++k) x += std::pow(path.increment(k, k + 1)(0), 4);
    s1 += x;
    s2 += x * x;
  }
  const HermiteMoments m8 = hermite_moments(K, h, 1.0);
  const double mean = s1 / n, var = (s2 - n * mean * mean) / (n - 1);
  const double z = std::abs(mean - 3.0 * K) / std::sqrt(m8.variance / n);
  const double var_rel = std::abs(var / m8.variance - 1.0);
  const double sk = std::abs((s_k_sum(256, h) / 256.0) / (s_k_sum(64, h) / 64.0) - 1.0);
  return {oracle_err <= kIsserlisTol && z <= kHermiteSigmas && var_rel <= kHermiteVarRel && sk <= kSkStability,
          "Isserlis error " + fmt("%.2g", oracle_err) + ", mean z=" + fmt("%.2f", z) + ", variance rel. error " +
              fmt("%.4f", var_rel) + ", S_K/K drift " + fmt("%.4f", sk)};
}

Outcome jacobian_contracts() {
  const FieldList quad{PolyVectorField::parse({"1", "0"}), PolyVectorField::parse({"0", "x1^2"})};
  double inv = 0.0, fd = 0.0, flow = 0.0;
  const double eps = 1e-4;
  for (const FieldList& f : {quad, yamato_fields()}) {
    const StrichartzRepresentation rep(f, f.size() == 2 ? 4 : 3);
    const std::size_t m = rep.state_dim(), d = f.size();
    const FbmSampler sampler(HurstParam(0.4), TimeGrid(1.0, 33));
    for (std::size_t k = 0; k < 20; ++k) {
      CounterRng rng(8008, k, m);
      Eigen::VectorXd a(m);
      for (std::size_t i = 0; i < m; ++i) a(static_cast<Eigen::Index>(i)) = 0.5 * rng.normal();
      const SamplePath p = sampler.sample(d, 8008, k);
      inv = std::max(inv, jacobian_path(rep, p, a).inverse_defect());
      const JacobianPair jp = jacobian_flow_strichartz(rep, p, a, 1.0);
      for (std::size_t c = 0; c < m; ++c) {
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) * eps;
        const Eigen::VectorXd col = (rep.solve(p, a + e, 1.0) - rep.solve(p, a - e, 1.0)) / (2.0 * eps);
        fd = std::max(fd, (col - jp.J.col(static_cast<Eigen::Index>(c))).cwiseAbs().maxCoeff());
      }
      const double u = 0.25 * (1 + k % 3);
      const std::size_t level = rep.level();
      const JacobianPair j0u = jacobian_flow(rep, path_signature(p, 0.0, u, level), a);
      const JacobianPair jut = jacobian_flow(rep, path_signature(p, u, 1.0, level), j0u.y);
      flow = std::max({flow, max_abs(jp.J - jut.J * j0u.J), max_abs(jp.J_inv - j0u.J_inv * jut.J_inv)});
    }
  }
  return {inv <= kInverseTol && fd <= kFdTol && flow <= kFlowTol,
          "|J J^-1 - I| " + fmt("%.3g", inv) + ", |J - FD| " + fmt("%.3g", fd) + ", flow defect " + fmt("%.3g", flow)};
}

Outcome malliavin_crosscheck() {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  const FbmSampler sampler(HurstParam(0.4), TimeGrid(1.0, 33));
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    CounterRng rng(9009, k, 0);
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) a(i) = rng.normal();
    const SamplePath p = sampler.sample(3, 9009, k);
    pairs = 0;
    for (std::size_t ti : {8u, 16u, 24u, 32u}) {
      const double t = p.grid()[ti];
      const MalliavinSlice ode = malliavin_derivative(rep, p, a, t);
      const MalliavinSlice jac = malliavin_derivative_jacobian(rep, p, a, t);
      // Five u per t spread over [0, t).
      for (std::size_t j = 0; j < 5; ++j, ++pairs) {
        const std::size_t ui = j * ti / 5;
        worst = std::max(worst, max_abs(ode.D[ui] - jac.D[ui]));
      }
    }
  }
  return {worst <= kMalliavinTol,
          "50 paths x " + std::to_string(pairs) + " (u, t) pairs, max difference " + fmt("%.3g", worst)};
}

Outcome norris_probe() {
  // U = A2, eta = e3: y = 4 B^3 and z = (0, 0, 4). The horizon puts the
  // small-ball events for all four eps inside the sample.
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  const FbmSampler sampler(HurstParam(0.45), TimeGrid(std::ldexp(1.0, -18), 17));
  DichotomyOptions opt;
  opt.q = 0.5;
  opt.gamma = 0.1;
  opt.alpha_ = 0.1;
  opt.steps = 8;
  const DichotomyTable t = norris_dichotomy_mc(rep, y[1], Eigen::VectorXd::Unit(3, 2), sampler,
                                               Eigen::VectorXd::Zero(3), {0.4, 0.2, 0.1, 0.05}, 10000, 1010, opt);
  std::ostringstream msg;
  for (const auto& r : t.rows) msg << "eps=" << r.eps << " freq=" << r.frequency << "; ";
  msg << "exponent " << (t.exponent ? fmt("%.3f", *t.exponent) : std::string("n/a"));
  return {t.non_increasing && t.exponent.has_value() && *t.exponent > 0.0, msg.str()};
}

Outcome density_probe() {
  const HurstParam h(0.4);
  const double T = 1.0;
  const std::size_t n = 100000;
  DensityOptions opt;
  opt.initial = Eigen::VectorXd::Zero(3);
  opt.initial(0) = 0.5;
  opt.seed = 1111;
  const DensityReport first = density_report(yamato_fields(), h, T, n, Eigen::VectorXd::Unit(3, 0), opt);
  const double sd = std::pow(T, h.value());
  double sup = 0.0;
  for (std::size_t k = 0; k < first.estimate.x.size(); ++k) {
    const double z = (first.estimate.x[k] - 0.5) / sd;
    sup = std::max(sup, std::abs(first.estimate.values[k] - std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI))));
  }
  opt.initial(0) = 0.0;
  opt.explicit_solution = yamato_explicit;
  bool atom_free = true;
  DensityReport third;
  try {
    third = density_report(yamato_fields(), h, T, n, Eigen::VectorXd::Unit(3, 2), opt);
  } catch (const NumericError&) {
    atom_free = false;
  }
  if (!atom_free) return {false, "component 3 has an atom"};
  const double skew_z = std::abs(third.moments.skewness) / third.moments.skewness_stderr;
  const double ks = third.ks_explicit.value_or(1.0);
  return {sup <= kKdeSupTol && skew_z <= kSkewSigmas && ks <= kKsTol,
          "component 1 KDE sup error " + fmt("%.4f", sup) + ", component 3 skewness z=" + fmt("%.2f", skew_z) +
              ", KS(solver, explicit) " + fmt("%.4f", ks)};
}

#ifdef ROUGHKIT_CLI_PATH
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const std::vector<std::string> experiments{"sample-fbm", "signature", "sewing-test", "solve", "check-fields", "strichartz",
                                             "jacobian", "malliavin", "norris-stats", "norris-mc", "density"};
  const auto root = std::filesystem::temp_directory_path() / "roughkit_acceptance_cli";
  std::filesystem::remove_all(root);
  std::size_t identical = 0;
  std::string failures;
  for (const auto& e : experiments) {
    const std::string config = std::string(ROUGHKIT_EXAMPLES_DIR) + "/" + e + ".json";
    std::string manifests[2];
    bool ran = true;
    for (int r = 0; r < 2; ++r) {
      const auto out = root / ("run" + std::to_string(r));
      const std::string cmd = std::string(ROUGHKIT_CLI_PATH) + " " + e + " --config " + config + " --out " +
                              out.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        ran = false;
        break;
      }
      for (const auto& d : std::filesystem::directory_iterator(out))
        if (d.path().filename().string().rfind(e + "-", 0) == 0) manifests[r] = slurp(d.path() / "manifest.json");
    }
    if (ran && !manifests[0].empty() && manifests[0] == manifests[1])
      ++identical;
    else
      failures += " " + e;
  }
  std::filesystem::remove_all(root);
  return {identical == experiments.size(), std::to_string(identical) + "/" + std::to_string(experiments.size()) +
                                               " experiments byte-identical" +
                                               (failures.empty() ? "" : ", differing:" + failures)};
}
#else
Outcome cli_determinism() { return {false, "command-line tool not built"}; }
#endif

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 fbm law", fbm_law},
      {"C2 chen identity", chen_identity},
      {"C3 sewing theorem", sewing_theorem},
      {"C4 levy area exponent", levy_area_exponent},
      {"C5 strichartz exactness", strichartz_exactness},
      {"C6 lie algebra", lie_algebra},
      {"C7 hermite statistics", hermite_statistics},
      {"C8 jacobian contracts", jacobian_contracts},
      {"C9 malliavin cross-check", malliavin_crosscheck},
      {"C10 norris dichotomy", norris_probe},
      {"C11 density probe", density_probe},
      {"C12 determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-26s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
