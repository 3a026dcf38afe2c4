#pragma once

#include "roughkit/grid.hpp"
#include "roughkit/increments.hpp"
#include "roughkit/liefields.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <vector>

namespace roughkit {

/// A level-2 rough path (B^1, B^2) on a grid, with the convention
/// B^{2,ij}_{st} = int_s^t B^{1,i}_{su} dB^j_u.
///
/// Only the consecutive-step values are stored; other pairs follow from
/// Chen's relation B^2_{st} = B^2_{0t} - B^2_{0s} - B^1_{0s} (x) B^1_{st}.
class RoughDriver {
 public:
  RoughDriver(TimeGrid grid, std::vector<Eigen::VectorXd> step1, std::vector<Eigen::MatrixXd> step2);
  /// Canonical lift of the piecewise-linear interpolation: B^2 = v v^T / 2 per step.
  static RoughDriver piecewise_linear(const SamplePath& path);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  const Eigen::VectorXd& step1(std::size_t k) const { return step1_.at(k); }
  const Eigen::MatrixXd& step2(std::size_t k) const { return step2_.at(k); }
  Eigen::VectorXd x1(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd x2(std::size_t i, std::size_t j) const;

  /// Driver restricted to every `stride`-th grid point (Chen-composed steps).
  RoughDriver coarsened(std::size_t stride) const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<Eigen::VectorXd> step1_;
  std::vector<Eigen::MatrixXd> step2_;
  std::vector<Eigen::VectorXd> prefix1_;
  std::vector<Eigen::MatrixXd> prefix2_;
};

/// A path z in R^m controlled by the driver: delta z_{st} = zeta_s B^1_{st} + r_{st}.
class ControlledPath {
 public:
  ControlledPath(std::shared_ptr<const RoughDriver> driver, Eigen::MatrixXd z, std::vector<Eigen::MatrixXd> zeta);

  const RoughDriver& driver() const { return *driver_; }
  std::shared_ptr<const RoughDriver> driver_ptr() const { return driver_; }
  const TimeGrid& grid() const { return driver_->grid(); }
  std::size_t dim() const { return static_cast<std::size_t>(z_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(z_.rows()); }

  const Eigen::MatrixXd& values() const { return z_; }
  Eigen::VectorXd z(std::size_t i) const { return z_.row(static_cast<Eigen::Index>(i)).transpose(); }
  const Eigen::MatrixXd& zeta(std::size_t i) const { return zeta_.at(i); }

  /// r_{st} = delta z_{st} - zeta_s B^1_{st}.
  Eigen::VectorXd remainder(std::size_t i, std::size_t j) const;
  Increment2 remainder_increment() const;
  Increment1 as_increment() const { return Increment1(grid(), z_); }

 private:
  std::shared_ptr<const RoughDriver> driver_;
  Eigen::MatrixXd z_;
  std::vector<Eigen::MatrixXd> zeta_;
};

struct RoughIntegral {
  /// int_s^t z (x) dB, flattened with index a * d + j for int z^a dB^j.
  Eigen::VectorXd value;
  /// Indefinite integral on the grid from t_0, controlled with derivative
  /// zeta^{(a,j), k} = z^a delta_{jk}.
  ControlledPath integral;
  /// Compensated sums on the nested dyadic sub-grids of [s, t], coarsest first.
  std::vector<Eigen::VectorXd> refinements;
};

struct RoughIntegralOptions {
  double tolerance = 1e-6;
};

/// Rough integral via compensated Riemann sums
/// sum [z^a_u B^{1,j}_{uu'} + zeta^{a,k}_u B^{2,kj}_{uu'}]. The limit is the
/// sum over the finest (grid) partition. Throws ConvergenceError if the last
/// refinement moves the sum by more than the relative tolerance while moving
/// it further than any coarser refinement did.
RoughIntegral rough_integral(const ControlledPath& z, double s, double t, RoughIntegralOptions options = {});

/// Contraction sum_j int z^j dB^j of a d-dimensional controlled path.
double contracted_integral(const RoughIntegral& integral, std::size_t m, std::size_t d);

struct RdeSolution {
  Eigen::MatrixXd values;  // rows = grid points, columns = state
  ControlledPath controlled;
};

/// Level-2 Davie scheme
/// y_{k+1} = y_k + V_i(y_k) B^{1,i} + (grad V_j . V_i)(y_k) B^{2,ij}.
/// Throws BlowUpError on a non-finite state.
RdeSolution rde_solve(const FieldList& fields, const Eigen::VectorXd& a, std::shared_ptr<const RoughDriver> driver);

struct ControlledNorm {
  double kappa;
  double z_part;
  double zeta_part;
  double remainder_part;
  double value;
};

/// N[z; C^kappa] + sum_j N[zeta^j; C^{kappa,0}] + N[r; C^{2 kappa}] on grid pairs.
ControlledNorm controlled_norm(const ControlledPath& z, double kappa);

}  // namespace roughkit
