#include "schema.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace roughkit::cli {

namespace {

Param integer(std::string key, Json fallback, double min, double max, std::string help) {
  return {std::move(key), Kind::Integer, std::move(fallback), min, max, false, std::move(help)};
}

Param real_open(std::string key, Json fallback, double min, double max, std::string help) {
  return {std::move(key), Kind::Real, std::move(fallback), min, max, true, std::move(help)};
}

Param real_min(std::string key, Json fallback, double min, std::string help) {
  return {std::move(key), Kind::Real, std::move(fallback), min, std::nullopt, true, std::move(help)};
}

Param boolean(std::string key, bool fallback, std::string help) {
  return {std::move(key), Kind::Boolean, fallback, std::nullopt, std::nullopt, false, std::move(help)};
}

Param string(std::string key, Json fallback, std::string help, std::vector<std::string> choices = {}) {
  return {std::move(key), Kind::String, std::move(fallback), std::nullopt, std::nullopt, false, std::move(help),
          std::move(choices)};
}

Param real_list(std::string key, Json fallback, std::string help) {
  return {std::move(key), Kind::RealList, std::move(fallback), std::nullopt, std::nullopt, false, std::move(help)};
}

Param required(Param p) {
  p.required = true;
  return p;
}

Param seed() { return integer("seed", 1, 0, 9007199254740991.0, "master seed of the counter-based generator"); }
Param threads() { return integer("threads", 0, 0, 1024, "worker threads, 0 = all available cores"); }
Param hurst(double h = 0.4) { return real_open("hurst", h, 0.0, 1.0, "Hurst parameter H"); }
Param horizon(double t = 1.0) { return real_min("horizon", t, 0.0, "time horizon T"); }
Param n_points(int n) { return integer("n_points", n, 2, 4097, "grid points on [0, T]"); }
Param mesh_exp() {
  return integer("mesh_exp", nullptr, 1, 12, "if set, n_points = 2^mesh_exp + 1 (mesh T 2^-mesh_exp)");
}
Param paths(int n, double max = 1e7) { return integer("paths", n, 1, max, "number of sample paths"); }
Param fields() { return required(string("fields", nullptr, "vector-field file (header \"m d\", then d blocks of m lines)")); }
Param initial() { return real_list("initial", nullptr, "initial point y_0 (defaults to the origin)"); }
Param order() { return integer("order", nullptr, 2, 8, "nilpotency order n (detected up to 5 when absent)"); }
Param steps(int s) { return integer("steps", s, 1, 100000, "RK4 steps for the exponential flow of Z"); }
Param path_index() { return integer("path_index", 0, 0, 1e12, "index of the driver path in the seed's stream"); }

std::map<std::string, std::vector<Param>> build() {
  std::map<std::string, std::vector<Param>> s;
  s["sample-fbm"] = {seed(),     threads(), hurst(),
                     horizon(),  n_points(257), mesh_exp(),
                     integer("dim", 1, 1, 64, "dimension d of the fBm"), paths(10, 100000)};
  s["signature"] = {seed(),
                    hurst(),
                    horizon(),
                    n_points(65),
                    mesh_exp(),
                    integer("dim", 2, 1, 16, "dimension d of the fBm"),
                    integer("level", 3, 1, 8, "truncation level N"),
                    path_index()};
  s["sewing-test"] = {seed(),
                      {"mu", Kind::Real, 1.2, 1.0, 3.0, true, "regularity mu of the closed 3-increments"},
                      n_points(129),
                      integer("elements", 20, 1, 100000, "number of random closed elements"),
                      integer("depth", 14, 0, 24, "dyadic levels below each grid step"),
                      boolean("geometric_tail", true, "extrapolate the geometric tail of the level series")};
  s["solve"] = {seed(), fields(), initial(), hurst(), horizon(), n_points(257), mesh_exp(), path_index(),
                string("method", "rde", "solver", {"rde", "strichartz"}), order(), steps(256)};
  s["check-fields"] = {seed(),
                       fields(),
                       integer("nilpotent", nullptr, 2, 12, "check that all brackets of this length vanish"),
                       real_list("hormander", nullptr, "point at which to compute the bracket rank"),
                       integer("bracket_order", 4, 1, 12, "longest bracket used for the rank"),
                       boolean("constant_brackets", false, "check that brackets of length >= 2 are constant")};
  s["strichartz"] = {seed(), threads(), fields(), initial(), hurst(), horizon(), n_points(257), mesh_exp(),
                     paths(20), order(), steps(256)};
  s["jacobian"] = {seed(),   threads(), fields(),   initial(), hurst(), horizon(), n_points(65), mesh_exp(),
                   paths(20), order(),  steps(256), real_list("moments", Json::array({2.0, 4.0}), "moment orders q")};
  s["malliavin"] = {seed(),    fields(),     initial(), hurst(), horizon(), n_points(33), mesh_exp(), path_index(),
                    real_min("t", nullptr, 0.0, "terminal time t (defaults to T)"), order(), steps(256),
                    string("route", "both", "computation route", {"both", "strichartz", "jacobian"})};
  s["norris-stats"] = {seed(),
                       threads(),
                       hurst(),
                       paths(200),
                       integer("delta_exp", 10, 2, 12, "fine scale delta = 2^-delta_exp"),
                       integer("Delta_exp", 5, 0, 11, "coarse scale Delta = 2^-Delta_exp"),
                       integer("dim", 1, 1, 16, "dimension d of the fBm"),
                       integer("hermite_K", 8, 1, 4096, "K for the Hermite moment check"),
                       integer("hermite_samples", 100000, 100, 1e8, "Monte-Carlo samples of the K-sum"),
                       real_list("us", Json::array({0.5, 1.0, 2.0, 4.0, 8.0}), "concentration thresholds u"),
                       real_open("interp_alpha", 0.25, 0.0, 1.0, "alpha of the interpolation check"),
                       real_open("interp_rho", 0.3, 0.0, 1.0, "rho of the interpolation check")};
  s["norris-mc"] = {seed(),
                    threads(),
                    fields(),
                    integer("u_index", 2, 1, 64, "U is the u_index-th field (1-based)"),
                    real_list("eta", nullptr, "unit direction eta (defaults to the last basis vector)"),
                    initial(),
                    hurst(0.45),
                    horizon(std::ldexp(1.0, -18)),
                    n_points(17),
                    mesh_exp(),
                    paths(10000),
                    real_list("eps", Json::array({0.4, 0.2, 0.1, 0.05}), "thresholds eps"),
                    real_min("q", 0.5, 0.0, "exponent q in eps^q"),
                    real_open("gamma", 0.1, 0.0, 1.0, "Hoelder exponent for y"),
                    real_open("alpha", 0.1, 0.0, 1.0, "Hoelder exponent for z"),
                    order(),
                    steps(8)};
  s["density"] = {seed(),
                  threads(),
                  fields(),
                  integer("component", nullptr, 1, 64, "1-based component of y_t (or give functional)"),
                  real_list("functional", nullptr, "linear functional applied to y_t"),
                  initial(),
                  hurst(),
                  horizon(),
                  n_points(65),
                  mesh_exp(),
                  paths(20000),
                  steps(64),
                  integer("max_order", 5, 2, 8, "largest nilpotency order tried"),
                  real_min("bandwidth", nullptr, 0.0, "KDE bandwidth (Silverman's rule when absent)"),
                  integer("kde_points", 512, 2, 100000, "KDE evaluation points")};
  return s;
}

const std::map<std::string, std::vector<Param>>& table() {
  static const auto t = build();
  return t;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Integer: return "integer";
    case Kind::Real: return "number";
    case Kind::Boolean: return "boolean";
    case Kind::String: return "string";
    case Kind::RealList: return "array of numbers";
    case Kind::StringList: return "array of strings";
  }
  return "?";
}

void check_range(const Param& p, double v) {
  const bool low = p.min && (p.exclusive ? v <= *p.min : v < *p.min);
  const bool high = p.max && (p.exclusive ? v >= *p.max : v > *p.max);
  if (low || high) {
    std::ostringstream msg;
    msg << std::setprecision(16) << "'" << p.key << "' = " << v << " is outside " << (p.exclusive ? "(" : "[");
    if (p.min) msg << *p.min; else msg << "-inf";
    msg << ", ";
    if (p.max) msg << *p.max; else msg << "inf";
    msg << (p.exclusive ? ")" : "]");
    throw ConfigError(msg.str());
  }
}

void check_value(const Param& p, const Json& v) {
  const auto wrong = [&] { throw ConfigError("'" + p.key + "' must be " + kind_name(p.kind)); };
  switch (p.kind) {
    case Kind::Integer: {
      if (!v.is_number()) wrong();
      const double d = v.get<double>();
      if (std::floor(d) != d) wrong();
      check_range(p, d);
      break;
    }
    case Kind::Real:
      if (!v.is_number()) wrong();
      if (!std::isfinite(v.get<double>())) wrong();
      check_range(p, v.get<double>());
      break;
    case Kind::Boolean:
      if (!v.is_boolean()) wrong();
      break;
    case Kind::String:
      if (!v.is_string()) wrong();
      if (!p.choices.empty()) {
        const auto s = v.get<std::string>();
        bool found = false;
        for (const auto& c : p.choices) found = found || c == s;
        if (!found) throw ConfigError("'" + p.key + "' = \"" + s + "\" is not one of the allowed values");
      }
      break;
    case Kind::RealList:
      if (!v.is_array() || v.empty()) wrong();
      for (const auto& x : v)
        if (!x.is_number() || !std::isfinite(x.get<double>())) wrong();
      break;
    case Kind::StringList:
      if (!v.is_array()) wrong();
      for (const auto& x : v)
        if (!x.is_string()) wrong();
      break;
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sample-fbm", "signature",  "sewing-test",  "solve",
                                              "check-fields", "strichartz", "jacobian",     "malliavin",
                                              "norris-stats", "norris-mc",  "density"};
  return names;
}

const std::vector<Param>& schema(const std::string& experiment) {
  const auto it = table().find(experiment);
  if (it == table().end()) throw ConfigError("unknown experiment '" + experiment + "'");
  return it->second;
}

void validate(const std::string& experiment, const Json& config) {
  if (!config.is_object()) throw ConfigError("configuration must be a JSON object");
  const auto& params = schema(experiment);
  for (const auto& [key, value] : config.items()) {
    if (key == "experiment") {
      if (!value.is_string() || value.get<std::string>() != experiment)
        throw ConfigError("'experiment' does not match the subcommand '" + experiment + "'");
      continue;
    }
    const Param* p = nullptr;
    for (const auto& q : params)
      if (q.key == key) p = &q;
    if (!p) throw ConfigError("unknown key '" + key + "' for experiment '" + experiment + "'");
    check_value(*p, value);
  }
  for (const auto& p : params)
    if (p.required && !config.contains(p.key)) throw ConfigError("missing required key '" + p.key + "'");
}

Json resolve(const std::string& experiment, const Json& file_config, const Json& flag_config) {
  if (!file_config.is_null()) validate(experiment, file_config);
  Json out;
  out["experiment"] = experiment;
  for (const auto& p : schema(experiment)) {
    if (flag_config.contains(p.key))
      out[p.key] = flag_config[p.key];
    else if (file_config.is_object() && file_config.contains(p.key))
      out[p.key] = file_config[p.key];
    else if (!p.fallback.is_null())
      out[p.key] = p.fallback;
  }
  if (out.contains("mesh_exp")) out["n_points"] = (1 << out["mesh_exp"].get<int>()) + 1;
  validate(experiment, out);
  return out;
}

std::string schema_markdown() {
  std::ostringstream md;
  md << std::setprecision(16);
  for (const auto& name : experiment_names()) {
    md << "### " << name << "\n\n| key | type | default | range | description |\n|---|---|---|---|---|\n";
    for (const auto& p : schema(name)) {
      std::string range;
      if (p.min || p.max) {
        std::ostringstream r;
        r << std::setprecision(16) << (p.exclusive ? "(" : "[");
        if (p.min) r << *p.min; else r << "-inf";
        r << ", ";
        if (p.max) r << *p.max; else r << "inf";
        r << (p.exclusive ? ")" : "]");
        range = r.str();
      }
      if (!p.choices.empty()) {
        for (std::size_t k = 0; k < p.choices.size(); ++k) range += (k ? ", " : "") + p.choices[k];
      }
      const std::string def = p.required ? "required" : (p.fallback.is_null() ? "-" : p.fallback.dump());
      md << "| `" << p.key << "` | " << kind_name(p.kind) << " | " << def << " | " << range << " | " << p.help
         << " |\n";
    }
    md << "\n";
  }
  return md.str();
}

}  // namespace roughkit::cli
