#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace roughkit {

/// Hurst index of a fractional Brownian motion, 0 < H < 1.
class HurstParam {
 public:
  explicit HurstParam(double value);

  double value() const { return value_; }
  /// True iff 1/3 < H < 1/2, the regime where a level-2 lift is needed
  /// and suffices.
  bool in_rough_regime() const { return value_ > 1.0 / 3.0 && value_ < 0.5; }

 private:
  double value_;
};

/// Uniform grid 0 = t_0 < ... < t_{n-1} = T.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_points);

  /// Grid with 2^exponent steps on [0, horizon].
  static TimeGrid dyadic(double horizon, int exponent);

  double horizon() const { return horizon_; }
  std::size_t size() const { return n_points_; }
  std::size_t steps() const { return n_points_ - 1; }
  double mesh() const { return horizon_ / static_cast<double>(n_points_ - 1); }

  double operator[](std::size_t i) const;
  std::vector<double> times() const;

  /// Index of `t` if it lies on the grid (relative tolerance 1e-9 of the mesh).
  std::optional<std::size_t> find(double t) const;
  /// As find(), but throws DomainError for off-grid times.
  std::size_t index_of(double t) const;

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && n_points_ == other.n_points_;
  }

 private:
  double horizon_;
  std::size_t n_points_;
};

/// A d-dimensional path sampled on a grid. Rows are grid points, columns
/// are components. Paths produced by the fBm sampler vanish at t = 0.
class SamplePath {
 public:
  SamplePath(TimeGrid grid, Eigen::MatrixXd values, HurstParam hurst, std::uint64_t seed = 0);

  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  HurstParam hurst() const { return hurst_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
  std::size_t size() const { return grid_.size(); }
  Eigen::VectorXd at(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)).transpose(); }
  /// B^1_{st} on grid indices.
  Eigen::VectorXd increment(std::size_t i, std::size_t j) const { return at(j) - at(i); }

 private:
  TimeGrid grid_;
  Eigen::MatrixXd values_;
  HurstParam hurst_;
  std::uint64_t seed_;
};

}  // namespace roughkit
