#include "experiments.hpp"

#include "roughkit/controlled.hpp"
#include "roughkit/densitylab.hpp"
#include "roughkit/error.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/flows.hpp"
#include "roughkit/increments.hpp"
#include "roughkit/io.hpp"
#include "roughkit/liefields.hpp"
#include "roughkit/norris.hpp"
#include "roughkit/parallel.hpp"
#include "roughkit/rng.hpp"
#include "roughkit/signature.hpp"
#include "roughkit/strichartz.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace roughkit::cli {

namespace {

struct Run {
  const Json& cfg;
  std::filesystem::path base;
  Artifacts& out;

  double real(const char* key) const { return cfg.at(key).get<double>(); }
  std::size_t count(const char* key) const { return cfg.at(key).get<std::size_t>(); }
  std::uint64_t seed() const { return cfg.at("seed").get<std::uint64_t>(); }
  std::size_t threads() const { return cfg.contains("threads") ? count("threads") : 1; }
  bool has(const char* key) const { return cfg.contains(key); }
  std::vector<double> reals(const char* key) const { return cfg.at(key).get<std::vector<double>>(); }

  HurstParam hurst() const { return HurstParam(real("hurst")); }
  TimeGrid grid() const { return TimeGrid(real("horizon"), count("n_points")); }
  FbmSampler sampler() const {
    FbmOptions opt;
    opt.threads = threads();
    return FbmSampler(hurst(), grid(), opt);
  }

  FieldList fields() const {
    std::filesystem::path p = cfg.at("fields").get<std::string>();
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p)) throw ConfigError("fields file not found: " + p.string());
    return load_fields(p);
  }

  Eigen::VectorXd vector_or_zero(const char* key, std::size_t m) const {
    if (!has(key)) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    const auto v = reals(key);
    if (v.size() != m)
      throw ConfigError("'" + std::string(key) + "' has " + std::to_string(v.size()) + " entries, expected " +
                        std::to_string(m));
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(m));
  }

  std::size_t order(const FieldList& f) const {
    if (has("order")) return count("order");
    for (std::size_t n = 2; n <= 5; ++n)
      if (is_nilpotent(f, n)) return n;
    throw HypothesisError("nilpotency", "no bracket length up to 5 vanishes; set 'order' explicitly");
  }
};

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json word_json(const Word& w) {
  Json a = Json::array();
  for (int l : w) a.push_back(l + 1);
  return a;
}

std::string file_index(std::size_t k, std::size_t total) {
  std::string s = std::to_string(k + 1);
  const std::size_t width = std::to_string(total).size();
  return std::string(width - std::min(width, s.size()), '0') + s;
}

io::PlotSeries series(const std::vector<double>& x, const std::vector<double>& y, std::string label) {
  return {x, y, std::move(label)};
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(r)] = m(r, c);
  return v;
}

Json sample_fbm_run(const Run& r) {
  const std::size_t dim = r.count("dim"), n = r.count("paths");
  const auto paths = r.sampler().sample_many(dim, n, r.seed());
  std::vector<io::PlotSeries> plot;
  for (std::size_t k = 0; k < n; ++k) {
    r.out.add("path_" + file_index(k, n) + ".csv", io::path_csv(paths[k]));
    if (k < 5) plot.push_back(series(paths[k].grid().times(), column(paths[k].values(), 0), "path " + std::to_string(k + 1)));
  }
  Json meta = Json::parse(io::path_metadata_json(paths.front()));
  meta["n_paths"] = n;
  r.out.add_json("metadata.json", meta);
  r.out.add("paths.svg", io::svg_line_plot(plot, "fBm sample paths, component 1", "t", "B_t"));
  return {{"paths", n}, {"points", r.count("n_points")}};
}

Json signature_run(const Run& r) {
  const SamplePath path = r.sampler().sample(r.count("dim"), r.seed(), r.count("path_index"));
  const auto sig = path_signature(path, 0.0, path.grid().horizon(), r.count("level"));
  r.out.add("path.csv", io::path_csv(path));
  r.out.add("signature.json", io::signature_json(sig));
  const double chen = chen_defect_level2(path);
  r.out.add_json("summary.json", {{"level", sig.level()}, {"dim", sig.dim()}, {"chen_defect_level2", chen}});
  return {{"entries", static_cast<std::size_t>(std::pow(sig.dim(), sig.level()))}, {"chen_defect_level2", chen}};
}

Json sewing_run(const Run& r) {
  const double mu = r.real("mu");
  const TimeGrid grid(1.0, r.count("n_points"));
  SewingOptions opts;
  opts.depth = static_cast<int>(r.count("depth"));
  opts.geometric_tail = r.cfg.at("geometric_tail").get<bool>();
  const std::size_t n = r.count("elements");
  std::vector<std::vector<double>> rows;
  double worst_ratio = 0.0, worst_delta = 0.0, worst_error = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    CounterRng rng(r.seed(), static_cast<std::uint32_t>(e), 0);
    const double a0 = rng.normal(), a1 = rng.normal(), w = 6.0 * rng.uniform(), ph = 6.3 * rng.uniform();
    const double b0 = rng.normal();
    const auto A = [=](double s, double t) {
      return (a0 + a1 * std::sin(w * s + ph)) * std::pow(t - s, mu) + b0 * std::pow(t - s, mu + 1.0);
    };
    const Increment3 h(
        grid, 1,
        [A](double s, double u, double t) { return Eigen::VectorXd::Constant(1, A(s, t) - A(s, u) - A(u, t)); }, true);
    const Increment2 L = sewing(h, mu, opts);
    const double lnorm = holder_norm(L, mu), hnorm = split_norm(h, mu / 2, mu / 2);
    double delta = 0.0, error = 0.0;
    const Increment3 dL = delta2(L);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        error = std::max(error, std::abs(L.at(i, j)(0) - A(grid[i], grid[j])));
        for (std::size_t k = j + 1; k < grid.size(); ++k)
          delta = std::max(delta, std::abs(dL.at(i, j, k)(0) - h.at(i, j, k)(0)));
      }
    rows.push_back({static_cast<double>(e + 1), a0, a1, w, ph, b0, lnorm, hnorm, lnorm / hnorm, delta, error});
    worst_ratio = std::max(worst_ratio, lnorm / hnorm);
    worst_delta = std::max(worst_delta, delta);
    worst_error = std::max(worst_error, error);
  }
  r.out.add("elements.csv", io::table_csv({"element", "a0", "a1", "omega", "phase", "b0", "holder_L", "split_h", "ratio",
                                           "max_delta_defect", "max_error"},
                                          rows));
  const Json summary{{"mu", mu},
                     {"elements", n},
                     {"sewing_constant", sewing_constant(mu)},
                     {"max_ratio", worst_ratio},
                     {"max_delta_defect", worst_delta},
                     {"max_error", worst_error}};
  r.out.add_json("summary.json", summary);
  return summary;
}

Json solve_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f);
  const Eigen::VectorXd a = r.vector_or_zero("initial", m);
  const SamplePath path = r.sampler().sample(f.size(), r.seed(), r.count("path_index"));
  const std::string method = r.cfg.at("method").get<std::string>();
  Eigen::MatrixXd y(static_cast<Eigen::Index>(path.size()), static_cast<Eigen::Index>(m));
  Json meta{{"fields_hash", fields_hash_hex(f)}, {"H", r.real("hurst")}, {"mesh", path.grid().mesh()},
            {"seed", r.seed()}, {"method", method}};
  if (method == "rde") {
    y = rde_solve(f, a, std::make_shared<RoughDriver>(RoughDriver::piecewise_linear(path))).values;
  } else {
    const StrichartzRepresentation rep(f, r.order(f));
    const auto sigs = prefix_signatures(path, rep.level());
    const int steps = static_cast<int>(r.count("steps"));
    for (std::size_t k = 0; k < sigs.size(); ++k)
      y.row(static_cast<Eigen::Index>(k)) = (k == 0 ? a : rep.solve(sigs[k], a, steps)).transpose();
    meta["order"] = rep.order();
  }
  r.out.add("path.csv", io::path_csv(path));
  r.out.add("solution.csv", io::solution_csv(path.grid(), y));
  r.out.add_json("metadata.json", meta);
  std::vector<io::PlotSeries> plot;
  for (Eigen::Index c = 0; c < y.cols(); ++c)
    plot.push_back(series(path.grid().times(), column(y, c), "y_" + std::to_string(c + 1)));
  r.out.add("solution.svg", io::svg_line_plot(plot, "solution (" + method + ")", "t", "y_t"));
  return {{"method", method}, {"y_T", to_json(y.row(y.rows() - 1).transpose())}};
}

Json check_fields_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f);
  Json report{{"m", m}, {"d", f.size()}, {"fields_hash", fields_hash_hex(f)}};
  Json fields = Json::array();
  for (const auto& v : f) fields.push_back(v.to_string());
  report["fields"] = fields;
  bool all = true;
  if (r.has("nilpotent")) {
    const std::size_t n = r.count("nilpotent");
    const auto res = is_nilpotent(f, n);
    Json c{{"order", n}, {"pass", res.nilpotent}};
    if (res.witness) c["witness"] = word_json(*res.witness);
    report["nilpotent"] = c;
    all = all && res.nilpotent;
  }
  if (r.has("hormander")) {
    const Eigen::VectorXd x = r.vector_or_zero("hormander", m);
    const std::size_t rank = hormander_rank(f, x, r.count("bracket_order"));
    report["hormander"] = {{"point", to_json(x)}, {"bracket_order", r.count("bracket_order")}, {"rank", rank},
                           {"pass", rank == m}};
    all = all && rank == m;
  }
  if (r.cfg.at("constant_brackets").get<bool>()) {
    const std::size_t up_to = r.has("nilpotent") ? r.count("nilpotent") : r.count("bracket_order");
    const bool ok = constant_brackets(f, up_to);
    report["constant_brackets"] = {{"up_to", up_to}, {"pass", ok}};
    all = all && ok;
  }
  report["all_pass"] = all;
  r.out.add_json("report.json", report);
  return report;
}

Json strichartz_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f), n = r.count("paths");
  const Eigen::VectorXd a = r.vector_or_zero("initial", m);
  const StrichartzRepresentation rep(f, r.order(f));
  const FbmSampler sampler = r.sampler();
  const int steps = static_cast<int>(r.count("steps"));
  const double T = sampler.grid().horizon();
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, r.threads(), [&](std::size_t k) {
    const SamplePath path = sampler.sample(f.size(), r.seed(), k);
    const Eigen::VectorXd ys = rep.solve(path, a, T, steps);
    const auto sol = rde_solve(f, a, std::make_shared<RoughDriver>(RoughDriver::piecewise_linear(path)));
    const Eigen::VectorXd yr = sol.values.row(sol.values.rows() - 1).transpose();
    rows[k] = {static_cast<double>(k + 1), (ys - yr).norm(), ys.norm()};
  });
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row[1]);
  r.out.add("comparison.csv", io::table_csv({"path", "strichartz_minus_rde", "norm_y_T"}, rows));
  Json words = Json::array();
  for (const auto& w : rep.words()) words.push_back(word_json(w));
  const Json summary{{"order", rep.order()}, {"words", words}, {"paths", n}, {"max_difference", worst}};
  r.out.add_json("summary.json", summary);
  return {{"order", rep.order()}, {"max_difference", worst}};
}

Json jacobian_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f);
  const Eigen::VectorXd a = r.vector_or_zero("initial", m);
  const StrichartzRepresentation rep(f, r.order(f));
  const FbmSampler sampler = r.sampler();
  const int steps = static_cast<int>(r.count("steps"));
  const auto probes =
      moment_probes(rep, sampler, a, r.count("paths"), r.seed(), r.reals("moments"), steps, r.threads());
  std::vector<std::vector<double>> rows;
  for (const auto& p : probes)
    for (const auto& row : p.rows) rows.push_back({static_cast<double>(p.n_paths), row.q, row.sup_y, row.J, row.J_inv});
  r.out.add("moments.csv", io::table_csv({"n_paths", "q", "sup_y", "J", "J_inv"}, rows));

  const JacobianPath jp = jacobian_path(rep, sampler.sample(f.size(), r.seed(), 0), a, steps);
  std::vector<std::vector<double>> trace;
  for (std::size_t k = 0; k < jp.J.size(); ++k)
    trace.push_back({jp.grid[k], jp.J[k].determinant(), jp.J[k].norm(), jp.J_inv[k].norm(),
                     (jp.J[k] * jp.J_inv[k] - Eigen::MatrixXd::Identity(jp.J[k].rows(), jp.J[k].cols())).cwiseAbs().maxCoeff()});
  r.out.add("path1_jacobian.csv", io::table_csv({"t", "det_J", "norm_J", "norm_J_inv", "inverse_defect"}, trace));
  const Json summary{{"order", rep.order()}, {"inverse_defect_path1", jp.inverse_defect()}};
  r.out.add_json("summary.json", summary);
  return summary;
}

Json malliavin_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f);
  const Eigen::VectorXd a = r.vector_or_zero("initial", m);
  const StrichartzRepresentation rep(f, r.order(f));
  const SamplePath path = r.sampler().sample(f.size(), r.seed(), r.count("path_index"));
  const double t = r.has("t") ? r.real("t") : path.grid().horizon();
  if (!path.grid().find(t)) throw ConfigError("'t' must be a grid time in [0, horizon]");
  const std::string route = r.cfg.at("route").get<std::string>();
  const int steps = static_cast<int>(r.count("steps"));
  std::optional<MalliavinSlice> via_z, via_j;
  if (route != "jacobian") {
    MalliavinOptions opt;
    opt.steps = steps;
    via_z = malliavin_derivative(rep, path, a, t, opt);
    r.out.add("malliavin_strichartz.csv", io::malliavin_csv(*via_z));
  }
  if (route != "strichartz") {
    via_j = malliavin_derivative_jacobian(rep, path, a, t, steps);
    r.out.add("malliavin_jacobian.csv", io::malliavin_csv(*via_j));
  }
  Json summary{{"t", t}, {"route", route}, {"order", rep.order()}};
  if (via_z && via_j) {
    double diff = 0.0;
    for (std::size_t k = 0; k < via_z->D.size(); ++k)
      diff = std::max(diff, (via_z->D[k] - via_j->D[k]).cwiseAbs().maxCoeff());
    summary["max_route_difference"] = diff;
  }
  r.out.add("path.csv", io::path_csv(path));
  r.out.add_json("summary.json", summary);
  return summary;
}

Json stat_block(double mean, double m2, std::size_t n, Json extra = Json::object()) {
  const double var = n > 1 ? (m2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1) : 0.0;
  Json j{{"estimate", mean}, {"stderr", std::sqrt(std::max(var, 0.0) / static_cast<double>(n))}, {"n", n},
         {"sample_variance", var}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

Json norris_stats_run(const Run& r) {
  const HurstParam h = r.hurst();
  const int a = static_cast<int>(r.count("delta_exp")), b = static_cast<int>(r.count("Delta_exp"));
  if (b >= a) throw ConfigError("'Delta_exp' must be smaller than 'delta_exp'");
  const double ia = r.real("interp_alpha"), irho = r.real("interp_rho");
  if (ia >= irho) throw ConfigError("'interp_alpha' must be smaller than 'interp_rho'");

  // Fourth variation of K unit-step increments.
  const std::size_t K = r.count("hermite_K"), ns = r.count("hermite_samples");
  const FbmSampler unit(h, TimeGrid(static_cast<double>(K), K + 1));
  std::vector<double> xk(ns);
  parallel_for(ns, r.threads(), [&](std::size_t p) {
    const SamplePath path = unit.sample(1, r.seed(), p);
    double x = 0.0;
    for (std::size_t k = 0; k < K; ++k) x += std::pow(path.increment(k, k + 1)(0), 4);
    xk[p] = x;
  });
  double s1 = 0.0, s2 = 0.0;
  for (double x : xk) {
    s1 += x;
    s2 += x * x;
  }
  const HermiteMoments hm = hermite_moments(K, h, 1.0);
  Json hermite_json = stat_block(s1 / static_cast<double>(ns), s2, ns, {{"K", K}, {"mean", hm.mean}, {"variance", hm.variance}});

  std::vector<std::vector<double>> sk;
  for (std::size_t k = 1; k <= 2 * K; k *= 2) sk.push_back({static_cast<double>(k), s_k_sum(k, h), s_k_sum(k, h) / k});
  for (std::size_t k = 4 * K; k <= 1024; k *= 2) sk.push_back({static_cast<double>(k), s_k_sum(k, h), s_k_sum(k, h) / k});
  r.out.add("s_k.csv", io::table_csv({"K", "S_K", "S_K_over_K"}, sk));

  // Two-scale block statistics on [0, 1] with mesh delta.
  const TwoScale scales = TwoScale::from_exponents(a, b);
  const std::size_t d = r.count("dim"), n = r.count("paths");
  FbmOptions fo;
  fo.threads = r.threads();
  const FbmSampler fine(h, TimeGrid::dyadic(1.0, a), fo);
  std::vector<BlockStats> blocks(n);
  parallel_for(n, r.threads(), [&](std::size_t p) { blocks[p] = block_stats(fine.sample(d, r.seed() + 1, p), scales); });
  std::vector<double> xs;
  for (const auto& bs : blocks) xs.insert(xs.end(), bs.X.begin(), bs.X.end());
  double b1 = 0.0, b2 = 0.0;
  for (double x : xs) {
    b1 += x;
    b2 += x * x;
  }
  const ConcentrationProfile prof = concentration_profile(xs, scales, h, d, r.reals("us"));
  std::vector<std::vector<double>> conc;
  for (const auto& row : prof.rows) conc.push_back({row.u, row.frequency});
  r.out.add("concentration.csv", io::table_csv({"u", "frequency"}, conc));
  Json block_json = stat_block(b1 / static_cast<double>(xs.size()), b2, xs.size(),
                               {{"mean", block_mean(scales, h, d)}, {"delta", scales.delta()}, {"Delta", scales.Delta()}});

  const SamplePath first = fine.sample(1, r.seed() + 2, 0);
  const InterpolationReport ir = interpolation_check(Increment1::from_path(first), ia, irho);

  Json summary{{"hermite", hermite_json},
               {"blocks", block_json},
               {"concentration", {{"scale", prof.scale}, {"mean", prof.mean}}},
               {"interpolation",
                {{"lhs", ir.lhs}, {"rhs", ir.rhs}, {"holds", ir.holds}, {"l1", ir.l1},
                 {"implied_constant", ir.implied_constant}}},
               {"parameters", r.cfg}};
  if (prof.tail_exponent) summary["concentration"]["tail_exponent"] = *prof.tail_exponent;
  r.out.add_json("summary.json", summary);
  return {{"hermite_z", std::abs(hermite_json["estimate"].get<double>() - hm.mean) / hermite_json["stderr"].get<double>()},
          {"interpolation_holds", ir.holds}};
}

Json norris_mc_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f), ui = r.count("u_index");
  if (ui > f.size()) throw ConfigError("'u_index' exceeds the number of fields");
  Eigen::VectorXd eta = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m - 1));
  if (r.has("eta")) eta = r.vector_or_zero("eta", m);
  if (std::abs(eta.norm() - 1.0) > 1e-12) throw ConfigError("'eta' must be a unit vector");
  const Eigen::VectorXd a = r.vector_or_zero("initial", m);
  const StrichartzRepresentation rep(f, r.order(f));
  DichotomyOptions opt;
  opt.q = r.real("q");
  opt.gamma = r.real("gamma");
  opt.alpha_ = r.real("alpha");
  opt.steps = static_cast<int>(r.count("steps"));
  opt.threads = r.threads();
  const std::size_t n = r.count("paths");
  const DichotomyTable t = norris_dichotomy_mc(rep, f[ui - 1], eta, r.sampler(), a, r.reals("eps"), n, r.seed(), opt);
  std::vector<std::vector<double>> rows;
  for (const auto& row : t.rows)
    rows.push_back({row.eps, static_cast<double>(row.count), static_cast<double>(row.n), row.frequency, row.stderr_,
                    row.upper_bound_only ? 1.0 : 0.0});
  r.out.add("dichotomy.csv", io::table_csv({"eps", "count", "n", "frequency", "stderr", "upper_bound_only"}, rows));
  Json est = Json::array();
  for (const auto& row : t.rows)
    est.push_back({{"eps", row.eps}, {"estimate", row.frequency}, {"stderr", row.stderr_}, {"n", row.n}});
  Json summary{{"rows", est}, {"non_increasing", t.non_increasing}, {"parameters", r.cfg}};
  summary["exponent"] = t.exponent ? Json(*t.exponent) : Json(nullptr);
  r.out.add_json("summary.json", summary);
  return {{"non_increasing", t.non_increasing}, {"exponent", summary["exponent"]}};
}

Json density_run(const Run& r) {
  const FieldList f = r.fields();
  const std::size_t m = state_dim(f);
  Eigen::VectorXd functional;
  if (r.has("functional") == r.has("component")) throw ConfigError("give exactly one of 'component' and 'functional'");
  if (r.has("component")) {
    const std::size_t c = r.count("component");
    if (c > m) throw ConfigError("'component' exceeds the state dimension");
    functional = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c - 1));
  } else {
    functional = r.vector_or_zero("functional", m);
  }
  DensityOptions opt;
  opt.initial = r.vector_or_zero("initial", m);
  opt.grid_points = r.count("n_points");
  opt.steps = static_cast<int>(r.count("steps"));
  opt.max_order = r.count("max_order");
  opt.seed = r.seed();
  opt.threads = r.threads();
  opt.kde.grid_points = r.count("kde_points");
  if (r.has("bandwidth")) opt.kde.bandwidth = r.real("bandwidth");
  const bool yamato = f == yamato_fields();
  if (yamato) opt.explicit_solution = yamato_explicit;
  const DensityReport rep = density_report(f, r.hurst(), r.real("horizon"), r.count("paths"), functional, opt);

  r.out.add("density.csv", io::density_csv(rep.estimate));
  r.out.add("density.svg", io::svg_line_plot({series(rep.estimate.x, rep.estimate.values, "KDE")},
                                             "density of the functional of y_T", "x", "density"));
  Json summary{{"nilpotency_order", rep.nilpotency_order},
               {"hormander_rank", rep.hormander_rank},
               {"n", rep.samples.size()},
               {"bandwidth", rep.estimate.bandwidth},
               {"mass", rep.estimate.mass()},
               {"mean", rep.moments.mean},
               {"variance", rep.moments.variance},
               {"skewness", rep.moments.skewness},
               {"skewness_stderr", rep.moments.skewness_stderr},
               {"proxy",
                {{"max_first_difference", rep.proxy.max_first_difference},
                 {"max_second_difference", rep.proxy.max_second_difference},
                 {"half_max_first_difference", rep.proxy_half.max_first_difference},
                 {"half_max_second_difference", rep.proxy_half.max_second_difference},
                 {"relative_change_first", rep.proxy_change_first},
                 {"relative_change_second", rep.proxy_change_second}}},
               {"explicit_formula", yamato ? "yamato" : "none"}};
  if (rep.ks_explicit) summary["ks_explicit"] = *rep.ks_explicit;
  r.out.add_json("summary.json", summary);
  return {{"mass", rep.estimate.mass()}, {"ks_explicit", summary.value("ks_explicit", Json(nullptr))}};
}

}  // namespace

Json run_experiment(const Json& config, const std::filesystem::path& base_dir, Artifacts& out) {
  static const std::map<std::string, std::function<Json(const Run&)>> runners{
      {"sample-fbm", sample_fbm_run}, {"signature", signature_run},     {"sewing-test", sewing_run},
      {"solve", solve_run},           {"check-fields", check_fields_run}, {"strichartz", strichartz_run},
      {"jacobian", jacobian_run},     {"malliavin", malliavin_run},   {"norris-stats", norris_stats_run},
      {"norris-mc", norris_mc_run},   {"density", density_run}};
  const std::string name = config.at("experiment").get<std::string>();
  const auto it = runners.find(name);
  if (it == runners.end()) throw ConfigError("unknown experiment '" + name + "'");
  const Json summary = it->second(Run{config, base_dir, out});
  out.finish();
  return summary;
}

}  // namespace roughkit::cli
