#include "roughkit/controlled.hpp"
#include "roughkit/densitylab.hpp"
#include "roughkit/error.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/flows.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace roughkit;

namespace {

SamplePath driver(std::size_t d, std::uint64_t seed, std::size_t index = 0, std::size_t n = 33) {
  return FbmSampler(HurstParam(0.4), TimeGrid(1.0, n)).sample(d, seed, index);
}

FieldList quadratic_system() {
  return {PolyVectorField::parse({"1", "0"}), PolyVectorField::parse({"0", "x1^2"})};
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(JacobianFlow, ZeroFieldsGiveIdentity) {
  const StrichartzRepresentation rep({PolyVectorField::zero(2)}, 2);
  const JacobianPair jp = jacobian_flow_strichartz(rep, driver(1, 1), Eigen::VectorXd::Ones(2), 1.0);
  EXPECT_EQ(jp.J, Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(jp.J_inv, Eigen::MatrixXd::Identity(2, 2));
}

TEST(JacobianFlow, YamatoClosedForm) {
  // Differentiating y3 = a3 + 2 a2 B^2 - 2 a1 B^3 + 2 (S^{32} - S^{23}) in a.
  const StrichartzRepresentation rep(yamato_fields(), 3);
  Eigen::VectorXd a(3);
  a << 0.4, -1.0, 0.5;
  for (std::size_t k = 0; k < 5; ++k) {
    const SamplePath p = driver(3, 2, k);
    const JacobianPair jp = jacobian_flow_strichartz(rep, p, a, 1.0);
    const Eigen::VectorXd b = p.at(32);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(3, 3);
    expected(2, 0) = -2.0 * b(2);
    expected(2, 1) = 2.0 * b(1);
    EXPECT_LT(max_abs(jp.J - expected), 1e-12);
    EXPECT_LT(max_abs(jp.J * jp.J_inv - Eigen::MatrixXd::Identity(3, 3)), 1e-12);
    EXPECT_LT((jp.y - yamato_explicit(p, a, 1.0)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(JacobianFlow, InverseContractOnNonlinearSystem) {
  const StrichartzRepresentation rep(quadratic_system(), 4);
  Eigen::VectorXd a(2);
  a << 0.3, 0.1;
  for (std::size_t k = 0; k < 5; ++k) {
    const JacobianPath path = jacobian_path(rep, driver(2, 3, k), a);
    EXPECT_LT(path.inverse_defect(), 1e-9);
    EXPECT_EQ(path.J.front(), Eigen::MatrixXd::Identity(2, 2));
  }
}

TEST(JacobianFlow, FiniteDifferenceOracle) {
  const StrichartzRepresentation rep(quadratic_system(), 4);
  Eigen::VectorXd a(2);
  a << -0.2, 0.7;
  const double eps = 1e-4;
  for (std::size_t k = 0; k < 5; ++k) {
    const SamplePath p = driver(2, 4, k);
    const JacobianPair jp = jacobian_flow_strichartz(rep, p, a, 1.0);
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(2, c) * eps;
      const Eigen::VectorXd fd = (rep.solve(p, a + e, 1.0) - rep.solve(p, a - e, 1.0)) / (2.0 * eps);
      EXPECT_LT((fd - jp.J.col(c)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(JacobianFlow, FlowProperty) {
  const StrichartzRepresentation rep(quadratic_system(), 4);
  Eigen::VectorXd a(2);
  a << 0.5, -0.5;
  const SamplePath p = driver(2, 5);
  const auto s0u = path_signature(p, 0.0, 0.375, 3);
  const auto sut = path_signature(p, 0.375, 1.0, 3);
  const JacobianPair j0u = jacobian_flow(rep, s0u, a);
  const JacobianPair jut = jacobian_flow(rep, sut, j0u.y);
  const JacobianPair j0t = jacobian_flow(rep, path_signature(p, 0.0, 1.0, 3), a);
  EXPECT_LT(max_abs(j0t.J - jut.J * j0u.J), 1e-8);
  EXPECT_LT(max_abs(j0t.J_inv - j0u.J_inv * jut.J_inv), 1e-8);
}

TEST(JacobianFlow, AugmentedRdeCrossCheck) {
  const FieldList fields = quadratic_system();
  const FieldList aug = jacobian_augmented_fields(fields);
  ASSERT_EQ(aug.size(), 2u);
  EXPECT_EQ(state_dim(aug), 2u + 2u * 4u);
  const StrichartzRepresentation rep(fields, 4);
  Eigen::VectorXd a(2);
  a << 0.2, 0.0;
  const SamplePath p = FbmSampler(HurstParam(0.45), TimeGrid::dyadic(1.0, 12)).sample(2, 6, 0);
  Eigen::VectorXd start = Eigen::VectorXd::Zero(10);
  start.head(2) = a;
  start(2) = start(5) = 1.0;  // J = I, column-major
  start(6) = start(9) = 1.0;  // J^{-1} = I
  const RdeSolution sol = rde_solve(aug, start, std::make_shared<const RoughDriver>(RoughDriver::piecewise_linear(p)));
  const Eigen::VectorXd end = sol.values.row(sol.values.rows() - 1).transpose();
  const JacobianPair jp = jacobian_flow_strichartz(rep, p, a, 1.0);
  EXPECT_LT((end.head(2) - jp.y).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT(max_abs(Eigen::Map<const Eigen::MatrixXd>(end.data() + 2, 2, 2) - jp.J), 1e-3);
  EXPECT_LT(max_abs(Eigen::Map<const Eigen::MatrixXd>(end.data() + 6, 2, 2) - jp.J_inv), 1e-3);
}

TEST(PsiDerivative, CameronMartinJumpOracle) {
  // Inserting a jump eps e_j at time u multiplies the signature by exp(eps e_j)
  // between S_{0u} and S_{ut}; the derivative at eps = 0 is D^j_u.
  const SamplePath p = driver(2, 7, 0, 17);
  const auto s0u = path_signature(p, 0.0, 0.25, 4);
  const auto sut = path_signature(p, 0.25, 1.0, 4);
  const double eps = 1e-4;
  for (int j = 0; j < 2; ++j) {
    auto jumped = [&](double e) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
      v(j) = e;
      return chen_concat(chen_concat(s0u, segment_signature(v, 4, 0.25, 0.25)), sut);
    };
    const auto plus = jumped(eps), minus = jumped(-eps);
    for (std::size_t k = 1; k <= 4; ++k)
      for (const Word& w : Word::all(k, 2)) {
        const double fd = (psi(plus, w) - psi(minus, w)) / (2.0 * eps);
        EXPECT_NEAR(psi_derivative(s0u, sut, w, j), fd, 1e-7) << w.to_string() << " j=" << j;
      }
  }
}

TEST(Malliavin, VanishesAfterT) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  const SamplePath p = driver(3, 8);
  const MalliavinSlice s = malliavin_derivative(rep, p, Eigen::VectorXd::Zero(3), 0.5);
  EXPECT_DOUBLE_EQ(s.t, 0.5);
  for (std::size_t k = 16; k < s.u.size(); ++k) EXPECT_EQ(s.D[k].norm(), 0.0);
  EXPECT_GT(s.D[3].norm(), 0.0);
}

TEST(Malliavin, CommutingConstantFields) {
  const FieldList f{PolyVectorField::parse({"1", "2"}), PolyVectorField::parse({"-1", "0.5"})};
  const StrichartzRepresentation rep(f, 2);
  const MalliavinSlice s = malliavin_derivative(rep, driver(2, 9), Eigen::VectorXd::Zero(2), 1.0);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, 2, 0.5;
  for (std::size_t k = 0; k < 32; ++k) EXPECT_LT(max_abs(s.D[k] - expected), 1e-13);
}

TEST(Malliavin, TwoRoutesAgreeOnYamato) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  Eigen::VectorXd a(3);
  a << 0.1, 0.2, 0.3;
  for (std::size_t k = 0; k < 5; ++k) {
    const SamplePath p = driver(3, 10, k);
    for (double t : {0.5, 1.0}) {
      const MalliavinSlice ode = malliavin_derivative(rep, p, a, t);
      const MalliavinSlice jac = malliavin_derivative_jacobian(rep, p, a, t);
      for (std::size_t u = 0; u < ode.u.size(); ++u) EXPECT_LT(max_abs(ode.D[u] - jac.D[u]), 1e-6);
    }
  }
}

TEST(Malliavin, RefusesNonConstantBrackets) {
  const StrichartzRepresentation rep(quadratic_system(), 4);
  try {
    malliavin_derivative(rep, driver(2, 11), Eigen::VectorXd::Zero(2), 1.0);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.hypothesis(), "constant brackets");
  }
}

TEST(ZProcess, ClosedFormOnYamato) {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  const double theta = 0.7;
  Eigen::VectorXd eta(3);
  eta << std::cos(theta), 0.0, std::sin(theta);
  Eigen::VectorXd a(3);
  a << 0.3, -0.2, 0.0;
  const SamplePath p = driver(3, 12);
  const auto z = z_process(rep, p, y[1], eta, a);
  // Z^U_t = cos(theta) + sin(theta) (2 a2 + 4 B^3_t) for U = A2.
  for (std::size_t k = 0; k < p.size(); ++k)
    EXPECT_NEAR(z[k], std::cos(theta) + std::sin(theta) * (2.0 * a(1) + 4.0 * p.at(k)(2)), 1e-11);
  EXPECT_NEAR(z[0], eta.dot(y[1].evaluate(a)), 1e-15);
  const auto zero = z_process(rep, p, PolyVectorField::zero(3), eta, a);
  for (double v : zero) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(z_process(rep, p, y[1], 2.0 * eta, a), DomainError);
}

TEST(ZProcess, DynamicsResidual) {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  Eigen::VectorXd eta(3);
  eta << 0.6, 0.0, 0.8;
  const PolyVectorField u = y[1] + y[2];
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_LT(z_dynamics_residual(rep, driver(3, 13, k, 129), u, eta, Eigen::VectorXd::Zero(3)), 1e-4);
}

TEST(ZProcess, IntegrandBracketsOnYamato) {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  Eigen::VectorXd eta(3);
  eta << 0.0, 0.0, 1.0;
  const SamplePath p = driver(3, 14);
  const JacobianPath jp = jacobian_path(rep, p, Eigen::VectorXd::Zero(3));
  const ControlledPath zi =
      z_integrand(jp, y, y[1], eta, std::make_shared<const RoughDriver>(RoughDriver::piecewise_linear(p)));
  // [A3, A2] = (0, 0, 4) and J^{-1} leaves e3 fixed, so z = (0, 0, 4) and zeta = 0.
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_NEAR(zi.z(k)(2), 4.0, 1e-12);
    EXPECT_NEAR(zi.z(k)(1), 0.0, 1e-12);
    EXPECT_LT(zi.zeta(k).norm(), 1e-12);
  }
}

TEST(MomentProbes, FiniteAndStable) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  const FbmSampler sampler(HurstParam(0.4), TimeGrid(1.0, 17));
  const auto probes = moment_probes(rep, sampler, Eigen::VectorXd::Zero(3), 100, 15, {2.0, 4.0, 8.0}, 32);
  ASSERT_EQ(probes.size(), 2u);
  EXPECT_EQ(probes[0].n_paths, 100u);
  EXPECT_EQ(probes[1].n_paths, 200u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_TRUE(std::isfinite(probes[1].rows[r].J_inv));
    EXPECT_GT(probes[0].rows[r].sup_y, 0.0);
  }
  // |J|_F^2 = 3 + 4 (B^2_1)^2 + 4 (B^3_1)^2 has mean 11 and standard deviation 8.
  for (const auto& probe : probes) {
    const double tol = 4.0 * 8.0 / std::sqrt(static_cast<double>(probe.n_paths));
    EXPECT_NEAR(probe.rows[0].J, 11.0, tol);
    EXPECT_NEAR(probe.rows[0].J_inv, 11.0, tol);
  }
}
