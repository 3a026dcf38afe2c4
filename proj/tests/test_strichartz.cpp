#include "roughkit/densitylab.hpp"
#include "roughkit/error.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/strichartz.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace roughkit;

namespace {

SamplePath driver(std::size_t d, std::uint64_t seed, std::size_t index = 0, std::size_t n = 65) {
  return FbmSampler(HurstParam(0.4), TimeGrid(1.0, n)).sample(d, seed, index);
}

FieldList quadratic_system() {
  return {PolyVectorField::parse({"1", "0"}), PolyVectorField::parse({"0", "x1^2"})};
}

}  // namespace

TEST(Permutations, DescentCounts) {
  const std::vector<int> id{1, 2, 3, 4}, swap{2, 1}, p312{3, 1, 2}, rev{4, 3, 2, 1};
  EXPECT_EQ(descent_count(id), 0);
  EXPECT_EQ(descent_count(swap), 1);
  EXPECT_EQ(descent_count(p312), 1);
  EXPECT_EQ(descent_count(rev), 3);
  const std::vector<int> bad{1, 1, 2}, zero{0, 1};
  EXPECT_THROW(descent_count(bad), DomainError);
  EXPECT_THROW(descent_count(zero), DomainError);
}

TEST(Permutations, CoefficientSumsMatchEulerianNumbers) {
  // Eulerian numbers A(k, e) by the recurrence A(k, e) = (e + 1) A(k-1, e) + (k - e) A(k-1, e-1).
  std::vector<std::vector<double>> eulerian{{1.0}};
  for (std::size_t k = 2; k <= 6; ++k) {
    std::vector<double> row(k, 0.0);
    const auto& prev = eulerian.back();
    for (std::size_t e = 0; e < k; ++e) {
      if (e < prev.size()) row[e] += static_cast<double>(e + 1) * prev[e];
      if (e >= 1) row[e] += static_cast<double>(k - e) * prev[e - 1];
    }
    eulerian.push_back(row);
  }
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto& terms = permutation_terms(k);
    double expected = 0.0, binom = 1.0, fact = 0.0;
    for (std::size_t e = 0; e < k; ++e) {
      expected += eulerian[k - 1][e] / (static_cast<double>(k * k) * binom);
      fact += eulerian[k - 1][e];
      binom = binom * static_cast<double>(k - 1 - e) / static_cast<double>(e + 1);
    }
    EXPECT_EQ(static_cast<double>(terms.size()), fact);
    double total = 0.0;
    for (const auto& t : terms) total += std::abs(t.coeff);
    EXPECT_NEAR(total, expected, 1e-14) << k;
    if (k <= 4) EXPECT_LE(total, 1.0);
  }
  // The bound by one fails first at k = 5: (1 + 26/4 + 66/6 + 26/4 + 1) / 25.
  double total5 = 0.0;
  for (const auto& t : permutation_terms(5)) total5 += std::abs(t.coeff);
  EXPECT_NEAR(total5, 26.0 / 25.0, 1e-14);
}

TEST(Permutations, CoefficientFormula) {
  const std::vector<int> s21{2, 1}, s132{1, 3, 2};
  EXPECT_DOUBLE_EQ(strichartz_coefficient(s21), -0.25);
  EXPECT_DOUBLE_EQ(strichartz_coefficient(s132), -1.0 / 18.0);
}

TEST(Psi, LowLevels) {
  const SamplePath p = driver(3, 1);
  const auto sig = path_signature(p, 0.0, 1.0, 3);
  EXPECT_DOUBLE_EQ(psi(sig, Word{2}), sig[Word{2}]);
  EXPECT_NEAR(psi(sig, Word{0, 1}), 0.25 * (sig[(Word{0, 1})] - sig[(Word{1, 0})]), 1e-15);
  EXPECT_NEAR(psi(sig, Word{0, 1}), -psi(sig, Word{1, 0}), 1e-15);
  EXPECT_EQ(psi(sig, Word{1, 1}), 0.0);
  EXPECT_THROW(psi(sig, Word{0, 1, 2, 0}), DomainError);
}

TEST(BuildZ, CommutingFieldsKeepOnlyLevelOne) {
  const FieldList f{PolyVectorField::parse({"1", "0"}), PolyVectorField::parse({"0", "2"})};
  const SamplePath p = driver(2, 2);
  const auto sig = path_signature(p, 0.0, 1.0, 1);
  const FlowField z = build_Z(f, sig, 2);
  Eigen::VectorXd expected(2);
  expected << p.at(64)(0), 2.0 * p.at(64)(1);
  EXPECT_TRUE(z(Eigen::VectorXd::Random(2)).isApprox(expected, 1e-14));
}

TEST(BuildZ, YamatoAssembly) {
  const FieldList y = yamato_fields();
  const SamplePath p = driver(3, 3);
  const auto sig = path_signature(p, 0.0, 1.0, 2);
  const FlowField z = build_Z(y, sig, 3);
  EXPECT_EQ(z.fields_hash, fields_hash(y));
  EXPECT_DOUBLE_EQ(z.t, 1.0);
  Eigen::VectorXd x(3);
  x << 0.3, -0.7, 2.0;
  const double p2 = psi(sig, Word{1}), p3 = psi(sig, Word{2});
  const double area = psi(sig, Word{1, 2}) - psi(sig, Word{2, 1});
  Eigen::VectorXd expected(3);
  expected << p2, p3, 2.0 * x(1) * p2 - 2.0 * x(0) * p3 - 4.0 * area;
  EXPECT_TRUE(z(x).isApprox(expected, 1e-13));
  const FlowField zero = build_Z(y, IteratedIntegrals(3, 2, 0.0, 1.0), 3);
  EXPECT_EQ(zero(x).norm(), 0.0);
}

TEST(BuildZ, RequiresNilpotency) {
  const SamplePath p = driver(2, 4);
  const auto sig = path_signature(p, 0.0, 1.0, 2);
  EXPECT_THROW(build_Z(quadratic_system(), sig, 3), PreconditionError);
  EXPECT_NO_THROW(build_Z(quadratic_system(), sig, 3, StrichartzOptions{true}));
  EXPECT_THROW(build_Z(yamato_fields(), path_signature(driver(3, 4), 0.0, 1.0, 1), 3), DomainError);
}

TEST(ExpFlow, ClosedFormCases) {
  const NumericField zc = PolyVectorField::zero(2).compile();
  Eigen::VectorXd a(2);
  a << 1.0, -2.0;
  EXPECT_EQ(exp_flow(FlowField{zc}, a), a);
  const NumericField c = PolyVectorField::parse({"0.5", "-3"}).compile();
  Eigen::VectorXd ac(2);
  ac << 1.5, -5.0;
  EXPECT_TRUE(exp_flow(FlowField{c}, a, 7).isApprox(ac, 1e-15));
  const NumericField lin = PolyVectorField::parse({"0.7*x1"}).compile();
  Eigen::VectorXd a1(1);
  a1 << 2.0;
  EXPECT_NEAR(exp_flow(FlowField{lin}, a1)(0), 2.0 * std::exp(0.7), 1e-10);
  EXPECT_THROW(exp_flow(FlowField{lin}, a1, 0), DomainError);
}

TEST(ExpFlow, BlowUpIsReported) {
  const NumericField riccati = PolyVectorField::parse({"x1^2"}).compile();
  Eigen::VectorXd a(1);
  a << 4.0;  // explodes at s = 1/4
  EXPECT_THROW(exp_flow(FlowField{riccati}, a, 64), BlowUpError);
}

TEST(StrichartzSolve, CommutingConstantFields) {
  const FieldList f{PolyVectorField::parse({"1", "0"}), PolyVectorField::parse({"1", "1"})};
  const SamplePath p = driver(2, 5);
  Eigen::VectorXd a(2);
  a << 0.1, 0.2;
  const Eigen::VectorXd y = strichartz_solve(f, p, a, 0.5, 2);
  const Eigen::VectorXd b = p.at(32);
  EXPECT_NEAR(y(0), 0.1 + b(0) + b(1), 1e-14);
  EXPECT_NEAR(y(1), 0.2 + b(1), 1e-14);
}

TEST(StrichartzSolve, YamatoIsExact) {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  Eigen::VectorXd a(3);
  a << -0.5, 0.25, 1.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const SamplePath p = driver(3, 6, k);
    for (double t : {0.5, 1.0}) {
      const Eigen::VectorXd got = rep.solve(p, a, t);
      EXPECT_LT((got - yamato_explicit(p, a, t)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(StrichartzSolve, FourStepNilpotentQuadraticSystem) {
  // y1 = a1 + B^1, y2 = a2 + a1^2 B^2 + 2 a1 S^{12} + 2 S^{112}.
  const FieldList f = quadratic_system();
  const StrichartzRepresentation rep(f, 4);
  EXPECT_EQ(rep.level(), 3u);
  Eigen::VectorXd a(2);
  a << 0.6, -0.3;
  for (std::size_t k = 0; k < 5; ++k) {
    const SamplePath p = driver(2, 7, k);
    const auto sig = path_signature(p, 0.0, 1.0, 3);
    const double expected = a(1) + a(0) * a(0) * sig[Word{1}] + 2.0 * a(0) * sig[(Word{0, 1})] +
                            2.0 * sig[(Word{0, 0, 1})];
    const Eigen::VectorXd got = rep.solve(sig, a, 512);
    EXPECT_NEAR(got(0), a(0) + sig[Word{0}], 1e-13);
    EXPECT_NEAR(got(1), expected, 1e-9);
  }
}

TEST(StrichartzSolve, ChenComposedSignatureGivesSameFlow) {
  const FieldList y = yamato_fields();
  const StrichartzRepresentation rep(y, 3);
  const SamplePath p = driver(3, 8);
  const auto left = path_signature(p, 0.0, 0.375, 2);
  const auto right = path_signature(p, 0.375, 1.0, 2);
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd direct = rep.solve(p, a, 1.0);
  const Eigen::VectorXd composed = rep.solve(chen_concat(left, right), a);
  EXPECT_LT((direct - composed).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StrichartzRepresentation, RetainsOnlyNonzeroBrackets) {
  const StrichartzRepresentation rep(yamato_fields(), 3);
  // A2, A3 and the two orderings of [A2, A3].
  EXPECT_EQ(rep.words().size(), 4u);
  EXPECT_EQ(rep.compiled().size(), rep.words().size());
  EXPECT_THROW(StrichartzRepresentation(yamato_fields(), 2), PreconditionError);
}
