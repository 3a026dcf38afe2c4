#pragma once

#include "roughkit/controlled.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/strichartz.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace roughkit {

struct JacobianPair {
  Eigen::VectorXd y;      // y_t = exp(Z)(a)
  Eigen::MatrixXd J;      // J_{s,t}
  Eigen::MatrixXd J_inv;  // J_{s,t}^{-1}
};

/// Variational flows along the exponential flow phi of Z over the
/// signature's interval, started at a: dJ~/ds = grad Z(phi) J~ and
/// dJbar/ds = -Jbar grad Z(phi), integrated by RK4 together with phi.
JacobianPair jacobian_flow(const StrichartzRepresentation& rep, const IteratedIntegrals& sig, const Eigen::VectorXd& a,
                           int steps = 256);

/// J_{0,t} and its inverse for the path's signature over [0, t].
JacobianPair jacobian_flow_strichartz(const StrichartzRepresentation& rep, const SamplePath& path,
                                      const Eigen::VectorXd& a, double t, int steps = 256);

/// J_{0,t} and J^{-1}_{0,t} at every grid time.
struct JacobianPath {
  TimeGrid grid;
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::MatrixXd> J;
  std::vector<Eigen::MatrixXd> J_inv;

  /// max_t |J J^{-1} - I| (max-abs entry).
  double inverse_defect() const;
};

JacobianPath jacobian_path(const StrichartzRepresentation& rep, const SamplePath& path, const Eigen::VectorXd& a,
                           int steps = 256);

/// Fields on R^{m + 2 m^2} whose RDE solution is (y, J, J^{-1}) flattened
/// column-major: V_i, grad V_i(y) J and -J^{-1} grad V_i(y).
FieldList jacobian_augmented_fields(const FieldList& fields);

/// D_u y_t for grid times u; column j is the derivative in driver component j.
struct MalliavinSlice {
  double t;
  std::vector<double> u;
  std::vector<Eigen::MatrixXd> D;  // m x d per u
};

struct MalliavinOptions {
  int steps = 256;
  /// Skip the constant-bracket hypothesis check.
  bool assume_constant_brackets = false;
};

/// Strichartz route: for each grid u integrate
/// dD/ds = grad Z(phi) D + sum_w D_u psi^w V_w(phi), D_0 = 0, along phi.
/// D_u y_t = 0 for u >= t. Throws HypothesisError unless all brackets of
/// order >= 2 are constant.
MalliavinSlice malliavin_derivative(const StrichartzRepresentation& rep, const SamplePath& path,
                                    const Eigen::VectorXd& a, double t, MalliavinOptions options = {});

/// Jacobian route: D^j_u y_t = J_{0,t} J^{-1}_{0,u} V_j(y_u) for grid u < t.
MalliavinSlice malliavin_derivative_jacobian(const StrichartzRepresentation& rep, const SamplePath& path,
                                             const Eigen::VectorXd& a, double t, int steps = 256);

/// Z^U_t = <J^{-1}_{0,t} U(y_t), eta> at every grid time. Throws
/// DomainError unless |eta| = 1.
std::vector<double> z_process(const StrichartzRepresentation& rep, const SamplePath& path, const PolyVectorField& u_field,
                              const Eigen::VectorXd& eta, const Eigen::VectorXd& a, int steps = 256);
std::vector<double> z_process(const JacobianPath& jp, const PolyVectorField& u_field, const Eigen::VectorXd& eta);

/// The integrand of Z^U as a controlled path: z^j = Z^{[V_j, U]} with
/// Gubinelli derivative zeta^{jk} = Z^{[V_k, [V_j, U]]}.
ControlledPath z_integrand(const JacobianPath& jp, const FieldList& fields, const PolyVectorField& u_field,
                           const Eigen::VectorXd& eta, std::shared_ptr<const RoughDriver> driver);

/// max_t |Z^U_t - Z^U_0 - sum_j int_0^t Z^{[V_j, U]} dB^j|.
double z_dynamics_residual(const StrichartzRepresentation& rep, const SamplePath& path, const PolyVectorField& u_field,
                           const Eigen::VectorXd& eta, const Eigen::VectorXd& a, int steps = 256);

struct MomentRow {
  double q;
  double sup_y;   // E[sup_t |y_t|^q]
  double J;       // E[|J_{0,T}|^q]
  double J_inv;   // E[|J_{0,T}^{-1}|^q]
};

struct MomentProbe {
  std::size_t n_paths;
  std::vector<MomentRow> rows;
};

/// Monte-Carlo moment estimates on n_paths and 2 n_paths fBm drivers
/// (Frobenius norms for matrices).
std::vector<MomentProbe> moment_probes(const StrichartzRepresentation& rep, const FbmSampler& sampler,
                                       const Eigen::VectorXd& a, std::size_t n_paths, std::uint64_t seed,
                                       const std::vector<double>& qs, int steps = 256, std::size_t threads = 1);

}  // namespace roughkit
