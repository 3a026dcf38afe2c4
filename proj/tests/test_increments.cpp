#include "roughkit/error.hpp"
#include "roughkit/fbm.hpp"
#include "roughkit/increments.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace roughkit;

namespace {

Increment1 smooth_path(const TimeGrid& g) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(g.size()), 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    v(static_cast<Eigen::Index>(k), 0) = std::sin(3.0 * g[k]);
    v(static_cast<Eigen::Index>(k), 1) = g[k] * g[k];
  }
  return Increment1(g, v);
}

// A_{st} = cos(s) (t - s)^p, closed by construction once passed through delta.
Increment3 power_coboundary(const TimeGrid& g, double p) {
  auto A = [p](double s, double t) { return std::cos(s) * std::pow(t - s, p); };
  return Increment3(
      g, 1,
      [A](double s, double u, double t) {
        Eigen::VectorXd v(1);
        v(0) = A(s, t) - A(s, u) - A(u, t);
        return v;
      },
      true);
}

}  // namespace

TEST(Delta, DeltaDeltaVanishes) {
  const TimeGrid g(1.0, 12);
  EXPECT_LT(delta_delta_defect(smooth_path(g)), 1e-15);
  const Increment3 dd = delta2(delta1(smooth_path(g)));
  for (std::size_t i = 0; i < 12; i += 3)
    for (std::size_t j = i; j < 12; j += 2)
      for (std::size_t k = j; k < 12; ++k) EXPECT_LT(dd.at(i, j, k).norm(), 1e-15);
}

TEST(Delta, DeltaOfPathIsIncrement) {
  const TimeGrid g(1.0, 9);
  const Increment1 p = smooth_path(g);
  const Increment2 d = delta1(p);
  EXPECT_TRUE(d.at(2, 7).isApprox(p.at(7) - p.at(2)));
  EXPECT_EQ(d.at(4, 4).norm(), 0.0);
}

TEST(Delta, ProductRule) {
  const TimeGrid g(1.0, 10);
  const Increment1 h = smooth_path(g);
  const Increment2 gg = Increment2::from_function(g, 4, [&](std::size_t i, std::size_t j) {
    Eigen::VectorXd v(4);
    const double s = g[i], t = g[j];
    v << s * t, std::exp(t - s) - 1.0, t * t - s * s + s * (t - s), std::sin(t - s);
    return v;
  });
  EXPECT_LT(product_rule_defect(gg, h), 1e-14);
}

TEST(Increment2, RejectsNonzeroDiagonalAndBadShapes) {
  const TimeGrid g(1.0, 5);
  Increment2 f(g, 2);
  EXPECT_THROW(f.set(2, 2, Eigen::VectorXd::Ones(2)), DomainError);
  EXPECT_THROW(f.set(1, 2, Eigen::VectorXd::Ones(3)), DomainError);
  EXPECT_THROW(f.at(3, 1), DomainError);
}

TEST(HolderNorm, PowerIncrement) {
  const TimeGrid g(1.0, 33);
  const Increment2 f = Increment2::from_function(g, 1, [&](std::size_t i, std::size_t j) {
    Eigen::VectorXd v(1);
    v(0) = 2.5 * std::pow(g[j] - g[i], 0.7);
    return v;
  });
  EXPECT_NEAR(holder_norm(f, 0.7), 2.5, 1e-12);
  EXPECT_NEAR(sup_norm(f), 2.5, 1e-12);
  EXPECT_NEAR(holder_sup_norm(f, 0.7), 5.0, 1e-12);
}

TEST(HolderNorm, PathNormAgreesWithIncrementNorm) {
  const TimeGrid g(1.0, 40);
  const Increment1 p = smooth_path(g);
  EXPECT_NEAR(holder_norm(p, 0.4), holder_norm(delta1(p), 0.4), 1e-14);
}

TEST(HolderNorm, FbmPathHasFiniteHolderNormBelowH) {
  const TimeGrid g(1.0, 257);
  const SamplePath p = FbmSampler(HurstParam(0.45), g).sample(1, 5, 0);
  const Increment1 inc = Increment1::from_path(p);
  // Below H the norm is moderate; far above it, it grows like mesh^{H - mu}.
  EXPECT_LT(holder_norm(inc, 0.3), 10.0);
  EXPECT_GT(holder_norm(inc, 0.9), holder_norm(inc, 0.3));
}

TEST(SplitNorm, MidpointOfPowerCoboundary) {
  const TimeGrid g(1.0, 9);
  const Increment3 h(
      g, 1,
      [](double s, double u, double t) {
        Eigen::VectorXd v(1);
        v(0) = std::pow(t - s, 1.5) - std::pow(u - s, 1.5) - std::pow(t - u, 1.5);
        return v;
      },
      true);
  EXPECT_NEAR(split_norm(h, 0.75, 0.75), std::pow(2.0, 1.5) - 2.0, 1e-12);
}

TEST(Sewing, ConstantValue) {
  EXPECT_NEAR(sewing_constant(1.2), 1.0 / (std::pow(2.0, 1.2) - 2.0), 1e-15);
  EXPECT_THROW(sewing_constant(1.0), DomainError);
}

TEST(Sewing, RecoversCoboundaryPrimitive) {
  const TimeGrid g(1.0, 17);
  const Increment3 h = power_coboundary(g, 3.0);
  const Increment2 L = sewing(h, 3.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      EXPECT_NEAR(L.at(i, j)(0), std::cos(g[i]) * std::pow(g[j] - g[i], 3.0), 1e-9) << i << "," << j;
}

TEST(Sewing, GeometricTailRecoversSlowSeries) {
  // At mu = 1.2 the level sums decay like 2^{-0.2 k}; the tail closes the gap.
  const TimeGrid g(1.0, 5);
  const Increment3 h = power_coboundary(g, 1.2);
  SewingOptions plain;
  plain.depth = 12;
  SewingOptions tail = plain;
  tail.geometric_tail = true;
  const Increment2 a = sewing(h, 1.2, plain), b = sewing(h, 1.2, tail);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double exact = std::cos(g[i]) * std::pow(g[i + 1] - g[i], 1.2);
    EXPECT_GT(std::abs(a.at(i, i + 1)(0) - exact), 1e-2 * std::abs(exact));
    EXPECT_NEAR(b.at(i, i + 1)(0), exact, 1e-3 * std::abs(exact));
  }
}

TEST(Sewing, InvertsDelta) {
  const TimeGrid g(2.0, 21);
  const Increment3 h = power_coboundary(g, 1.3);
  const Increment2 L = sewing(h, 1.3);
  const Increment3 dL = delta2(L);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      for (std::size_t k = j + 1; k < g.size(); ++k) EXPECT_NEAR(dL.at(i, j, k)(0), h.at(i, j, k)(0), 1e-12);
}

TEST(Sewing, BoundedByConstantTimesSplitNorm) {
  const TimeGrid g(1.0, 33);
  const double mu = 1.5;
  const Increment3 h(
      g, 1,
      [mu](double s, double u, double t) {
        Eigen::VectorXd v(1);
        v(0) = std::pow(t - s, mu) - std::pow(u - s, mu) - std::pow(t - u, mu);
        return v;
      },
      true);
  SewingOptions opts;
  opts.depth = 20;
  const double ratio = holder_norm(sewing(h, mu, opts), mu) / split_norm(h, mu / 2, mu / 2);
  EXPECT_LE(ratio, sewing_constant(mu) + 1e-3);
  EXPECT_NEAR(ratio, sewing_constant(mu), 1e-3);
}

TEST(Sewing, RejectsNonClosedInput) {
  const TimeGrid g(1.0, 9);
  const Increment3 h(
      g, 1, [](double s, double u, double t) { return Eigen::VectorXd::Constant(1, s * u * t + u); }, true);
  EXPECT_THROW(sewing(h, 1.5), ValidationError);
  EXPECT_THROW(sewing(power_coboundary(g, 2.0), 0.9), DomainError);
}

TEST(Sewing, GridOnlyIncrementTelescopes) {
  const TimeGrid g(1.0, 9);
  const Increment3 h = power_coboundary(g, 2.0);
  const Increment3 grid_only(g, 1, [&](double s, double u, double t) { return h(s, u, t); }, false);
  const Increment2 L = sewing(grid_only, 2.0);
  // No refinement below the mesh: consecutive values are zero.
  EXPECT_EQ(L.at(3, 4)(0), 0.0);
  EXPECT_NEAR(L.at(0, 2)(0), h.at(0, 1, 2)(0), 1e-15);
}
