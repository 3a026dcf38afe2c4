#include "roughkit/flows.hpp"

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"

#include <cmath>

namespace roughkit {

namespace {

// One RK4 step for (phi, J~, Jbar).
struct VarState {
  Eigen::VectorXd phi;
  Eigen::MatrixXd J;
  Eigen::MatrixXd Jbar;
};

VarState var_rhs(const FlowField& z, const VarState& s) {
  const Eigen::MatrixXd g = z.jacobian(s.phi);
  return {z(s.phi), g * s.J, -s.Jbar * g};
}

VarState axpy(const VarState& s, double h, const VarState& k) {
  return {s.phi + h * k.phi, s.J + h * k.J, s.Jbar + h * k.Jbar};
}

}  // namespace

JacobianPair jacobian_flow(const StrichartzRepresentation& rep, const IteratedIntegrals& sig, const Eigen::VectorXd& a,
                           int steps) {
  if (steps < 1) throw DomainError("jacobian_flow needs at least one step");
  const auto m = static_cast<Eigen::Index>(rep.state_dim());
  if (a.size() != m) throw DomainError("initial condition has the wrong dimension");
  const FlowField z = rep.build_Z(sig);
  const double h = 1.0 / steps;
  VarState s{a, Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(m, m)};
  for (int k = 0; k < steps; ++k) {
    const VarState k1 = var_rhs(z, s);
    const VarState k2 = var_rhs(z, axpy(s, 0.5 * h, k1));
    const VarState k3 = var_rhs(z, axpy(s, 0.5 * h, k2));
    const VarState k4 = var_rhs(z, axpy(s, h, k3));
    s.phi += (h / 6.0) * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    s.J += (h / 6.0) * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J);
    s.Jbar += (h / 6.0) * (k1.Jbar + 2.0 * k2.Jbar + 2.0 * k3.Jbar + k4.Jbar);
    if (!s.phi.allFinite() || !s.J.allFinite() || !s.Jbar.allFinite()) {
      throw BlowUpError("Jacobian flow is no longer finite", (k + 1) * h);
    }
  }
  return {s.phi, s.J, s.Jbar};
}

JacobianPair jacobian_flow_strichartz(const StrichartzRepresentation& rep, const SamplePath& path,
                                      const Eigen::VectorXd& a, double t, int steps) {
  const std::size_t k = path.grid().index_of(t);
  if (k == 0) {
    const auto m = static_cast<Eigen::Index>(rep.state_dim());
    return {a, Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(m, m)};
  }
  return jacobian_flow(rep, path_signature_indices(path, 0, k, rep.level()), a, steps);
}

double JacobianPath::inverse_defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < J.size(); ++k) {
    const auto m = J[k].rows();
    worst = std::max(worst, (J[k] * J_inv[k] - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff());
  }
  return worst;
}

JacobianPath jacobian_path(const StrichartzRepresentation& rep, const SamplePath& path, const Eigen::VectorXd& a,
                           int steps) {
  const auto prefixes = prefix_signatures(path, rep.level());
  JacobianPath out{path.grid(), {}, {}, {}};
  const auto m = static_cast<Eigen::Index>(rep.state_dim());
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k == 0) {
      out.y.push_back(a);
      out.J.push_back(Eigen::MatrixXd::Identity(m, m));
      out.J_inv.push_back(Eigen::MatrixXd::Identity(m, m));
      continue;
    }
    auto pair = jacobian_flow(rep, prefixes[k], a, steps);
    out.y.push_back(std::move(pair.y));
    out.J.push_back(std::move(pair.J));
    out.J_inv.push_back(std::move(pair.J_inv));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Polynomial embed(const Polynomial& p, std::size_t vars) {
  Polynomial out(vars);
  for (const auto& [e, c] : p.terms()) {
    Exponents big(vars, 0);
    std::copy(e.begin(), e.end(), big.begin());
    out.add_term(big, c);
  }
  return out;
}

}  // namespace

FieldList jacobian_augmented_fields(const FieldList& fields) {
  const std::size_t m = state_dim(fields);
  const std::size_t total = m + 2 * m * m;
  auto J = [&](std::size_t r, std::size_t c) { return Polynomial::variable(total, m + c * m + r); };
  auto Jbar = [&](std::size_t r, std::size_t c) { return Polynomial::variable(total, m + m * m + c * m + r); };
  FieldList out;
  for (const auto& v : fields) {
    std::vector<Polynomial> comps;
    comps.reserve(total);
    for (std::size_t i = 0; i < m; ++i) comps.push_back(embed(v[i], total));
    std::vector<std::vector<Polynomial>> grad(m, std::vector<Polynomial>(m, Polynomial(total)));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < m; ++l) grad[i][l] = embed(v[i].derivative(l), total);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t r = 0; r < m; ++r) {
        Polynomial p(total);
        for (std::size_t l = 0; l < m; ++l)
          if (!grad[r][l].is_zero()) p += grad[r][l] * J(l, c);
        comps.push_back(std::move(p));
      }
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t r = 0; r < m; ++r) {
        Polynomial p(total);
        for (std::size_t l = 0; l < m; ++l)
          if (!grad[l][c].is_zero()) p -= Jbar(r, l) * grad[l][c];
        comps.push_back(std::move(p));
      }
    out.emplace_back(std::move(comps));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_constant_brackets(const StrichartzRepresentation& rep) {
  if (rep.order() >= 3 && !constant_brackets(rep.fields(), rep.order() - 1)) {
    throw HypothesisError("constant brackets", "a bracket of order >= 2 has positive degree");
  }
}

}  // namespace

MalliavinSlice malliavin_derivative(const StrichartzRepresentation& rep, const SamplePath& path,
                                    const Eigen::VectorXd& a, double t, MalliavinOptions options) {
  if (!options.assume_constant_brackets) require_constant_brackets(rep);
  if (options.steps < 1) throw DomainError("malliavin_derivative needs at least one step");
  const std::size_t kt = path.grid().index_of(t);
  const std::size_t d = rep.driver_dim();
  const auto m = static_cast<Eigen::Index>(rep.state_dim());
  const auto dd = static_cast<Eigen::Index>(d);
  const std::size_t level = rep.level();

  MalliavinSlice out{path.grid()[kt], path.grid().times(), std::vector<Eigen::MatrixXd>(path.size(), Eigen::MatrixXd::Zero(m, dd))};
  if (kt == 0) return out;

  const auto prefixes = prefix_signatures(path, level);
  const auto suffixes = suffix_signatures(path, kt, level);
  const FlowField z = rep.build_Z(prefixes[kt]);
  const auto& words = rep.words();
  const double h = 1.0 / options.steps;

  for (std::size_t ku = 0; ku < kt; ++ku) {
    std::vector<FlowField> drive;
    drive.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> w(words.size());
      for (std::size_t q = 0; q < words.size(); ++q)
        w[q] = psi_derivative(prefixes[ku], suffixes[ku], words[q], static_cast<int>(j));
      drive.push_back(rep.assemble(w, t));
    }
    auto rhs = [&](const Eigen::VectorXd& phi, const Eigen::MatrixXd& D, Eigen::VectorXd& dphi, Eigen::MatrixXd& dD) {
      dphi = z(phi);
      dD = z.jacobian(phi) * D;
      for (std::size_t j = 0; j < d; ++j) dD.col(static_cast<Eigen::Index>(j)) += drive[j](phi);
    };
    Eigen::VectorXd phi = a;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, dd);
    Eigen::VectorXd p1, p2, p3, p4;
    Eigen::MatrixXd d1, d2, d3, d4;
    for (int k = 0; k < options.steps; ++k) {
      rhs(phi, D, p1, d1);
      rhs(phi + 0.5 * h * p1, D + 0.5 * h * d1, p2, d2);
      rhs(phi + 0.5 * h * p2, D + 0.5 * h * d2, p3, d3);
      rhs(phi + h * p3, D + h * d3, p4, d4);
      phi += (h / 6.0) * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
      D += (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
      if (!D.allFinite() || !phi.allFinite()) throw BlowUpError("Malliavin flow is no longer finite", (k + 1) * h);
    }
    out.D[ku] = std::move(D);
  }
  return out;
}

MalliavinSlice malliavin_derivative_jacobian(const StrichartzRepresentation& rep, const SamplePath& path,
                                             const Eigen::VectorXd& a, double t, int steps) {
  const std::size_t kt = path.grid().index_of(t);
  const std::size_t d = rep.driver_dim();
  const auto m = static_cast<Eigen::Index>(rep.state_dim());
  MalliavinSlice out{path.grid()[kt], path.grid().times(),
                     std::vector<Eigen::MatrixXd>(path.size(), Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(d)))};
  if (kt == 0) return out;
  const auto prefixes = prefix_signatures(path, rep.level());
  const JacobianPair at_t = jacobian_flow(rep, prefixes[kt], a, steps);
  for (std::size_t ku = 0; ku < kt; ++ku) {
    JacobianPair at_u = ku == 0 ? JacobianPair{a, Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(m, m)}
                                : jacobian_flow(rep, prefixes[ku], a, steps);
    const Eigen::MatrixXd carry = at_t.J * at_u.J_inv;
    for (std::size_t j = 0; j < d; ++j)
      out.D[ku].col(static_cast<Eigen::Index>(j)) = carry * rep.fields()[j].evaluate(at_u.y);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_unit(const Eigen::VectorXd& eta) {
  if (std::abs(eta.norm() - 1.0) > 1e-12) throw DomainError("direction eta must have unit norm");
}

}  // namespace

std::vector<double> z_process(const JacobianPath& jp, const PolyVectorField& u_field, const Eigen::VectorXd& eta) {
  require_unit(eta);
  if (static_cast<std::size_t>(eta.size()) != u_field.dim()) throw DomainError("eta has the wrong dimension");
  const NumericField u = u_field.compile();
  std::vector<double> out;
  out.reserve(jp.y.size());
  for (std::size_t k = 0; k < jp.y.size(); ++k) out.push_back(eta.dot(jp.J_inv[k] * u(jp.y[k])));
  return out;
}

std::vector<double> z_process(const StrichartzRepresentation& rep, const SamplePath& path, const PolyVectorField& u_field,
                              const Eigen::VectorXd& eta, const Eigen::VectorXd& a, int steps) {
  require_unit(eta);
  return z_process(jacobian_path(rep, path, a, steps), u_field, eta);
}

ControlledPath z_integrand(const JacobianPath& jp, const FieldList& fields, const PolyVectorField& u_field,
                           const Eigen::VectorXd& eta, std::shared_ptr<const RoughDriver> driver) {
  const std::size_t d = fields.size();
  const std::size_t n = jp.y.size();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<Eigen::MatrixXd> zeta(n, Eigen::MatrixXd(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  for (std::size_t j = 0; j < d; ++j) {
    const PolyVectorField w = bracket(fields[j], u_field);
    const auto zj = z_process(jp, w, eta);
    for (std::size_t k = 0; k < n; ++k) z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = zj[k];
    for (std::size_t l = 0; l < d; ++l) {
      const auto zl = z_process(jp, bracket(fields[l], w), eta);
      for (std::size_t k = 0; k < n; ++k) zeta[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = zl[k];
    }
  }
  return ControlledPath(std::move(driver), std::move(z), std::move(zeta));
}

double z_dynamics_residual(const StrichartzRepresentation& rep, const SamplePath& path, const PolyVectorField& u_field,
                           const Eigen::VectorXd& eta, const Eigen::VectorXd& a, int steps) {
  const JacobianPath jp = jacobian_path(rep, path, a, steps);
  const auto zu = z_process(jp, u_field, eta);
  auto driver = std::make_shared<const RoughDriver>(RoughDriver::piecewise_linear(path));
  const ControlledPath integrand = z_integrand(jp, rep.fields(), u_field, eta, driver);
  const RoughIntegral integral = rough_integral(integrand, 0.0, path.grid().horizon());
  const std::size_t d = rep.driver_dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    double rhs = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      rhs += integral.integral.values()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j * d + j));
    worst = std::max(worst, std::abs(zu[k] - zu[0] - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::vector<MomentProbe> moment_probes(const StrichartzRepresentation& rep, const FbmSampler& sampler,
                                       const Eigen::VectorXd& a, std::size_t n_paths, std::uint64_t seed,
                                       const std::vector<double>& qs, int steps, std::size_t threads) {
  const std::size_t total = 2 * n_paths;
  struct PathNorms {
    double sup_y = 0.0;
    double J = 0.0;
    double J_inv = 0.0;
  };
  std::vector<PathNorms> norms(total);
  parallel_for(total, threads, [&](std::size_t k) {
    const SamplePath path = sampler.sample(rep.driver_dim(), seed, k);
    const JacobianPath jp = jacobian_path(rep, path, a, steps);
    PathNorms pn;
    for (const auto& y : jp.y) pn.sup_y = std::max(pn.sup_y, y.norm());
    pn.J = jp.J.back().norm();
    pn.J_inv = jp.J_inv.back().norm();
    norms[k] = pn;
  });
  std::vector<MomentProbe> out;
  for (std::size_t count : {n_paths, total}) {
    MomentProbe probe{count, {}};
    for (double q : qs) {
      MomentRow row{q, 0.0, 0.0, 0.0};
      for (std::size_t k = 0; k < count; ++k) {
        row.sup_y += std::pow(norms[k].sup_y, q);
        row.J += std::pow(norms[k].J, q);
        row.J_inv += std::pow(norms[k].J_inv, q);
      }
      row.sup_y /= static_cast<double>(count);
      row.J /= static_cast<double>(count);
      row.J_inv /= static_cast<double>(count);
      probe.rows.push_back(row);
    }
    out.push_back(std::move(probe));
  }
  return out;
}

}  // namespace roughkit
