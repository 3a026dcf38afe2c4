#include "roughkit/grid.hpp"

#include "roughkit/error.hpp"

#include <cmath>
#include <string>

namespace roughkit {

HurstParam::HurstParam(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError("Hurst parameter must lie in (0, 1), got " + std::to_string(value));
  }
}

TimeGrid::TimeGrid(double horizon, std::size_t n_points) : horizon_(horizon), n_points_(n_points) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("time horizon must be positive and finite");
  }
  if (n_points < 2) {
    throw DomainError("a time grid needs at least two points");
  }
}

TimeGrid TimeGrid::dyadic(double horizon, int exponent) {
  if (exponent < 0 || exponent > 24) {
    throw DomainError("dyadic exponent out of range [0, 24]: " + std::to_string(exponent));
  }
  return TimeGrid(horizon, (std::size_t{1} << exponent) + 1);
}

double TimeGrid::operator[](std::size_t i) const {
  if (i + 1 == n_points_) return horizon_;
  return horizon_ * static_cast<double>(i) / static_cast<double>(n_points_ - 1);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) out[i] = (*this)[i];
  return out;
}

std::optional<std::size_t> TimeGrid::find(double t) const {
  if (!std::isfinite(t)) return std::nullopt;
  const double pos = t / mesh();
  const double rounded = std::round(pos);
  if (rounded < 0.0 || rounded > static_cast<double>(n_points_ - 1)) return std::nullopt;
  if (std::abs(pos - rounded) > 1e-9) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

std::size_t TimeGrid::index_of(double t) const {
  auto idx = find(t);
  if (!idx) throw DomainError("time " + std::to_string(t) + " is not on the grid");
  return *idx;
}

SamplePath::SamplePath(TimeGrid grid, Eigen::MatrixXd values, HurstParam hurst, std::uint64_t seed)
    : grid_(grid), values_(std::move(values)), hurst_(hurst), seed_(seed) {
  if (static_cast<std::size_t>(values_.rows()) != grid_.size()) {
    throw DomainError("path has " + std::to_string(values_.rows()) + " rows but the grid has " +
                      std::to_string(grid_.size()) + " points");
  }
  if (values_.cols() < 1) throw DomainError("path dimension must be at least 1");
  if (!values_.row(0).isZero(0.0)) throw DomainError("sample paths must vanish at t = 0");
}

}  // namespace roughkit
