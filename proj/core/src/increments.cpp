#include "roughkit/increments.hpp"

#include "roughkit/error.hpp"
#include "roughkit/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace roughkit {

Increment1::Increment1(TimeGrid grid, Eigen::MatrixXd values) : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != grid_.size()) {
    throw DomainError("Increment1 values do not match the grid size");
  }
}

Increment1 Increment1::from_path(const SamplePath& path) { return Increment1(path.grid(), path.values()); }

Increment2::Increment2(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), data_(grid.size() * (grid.size() + 1) / 2 * dim, 0.0) {
  if (dim == 0) throw DomainError("increment dimension must be positive");
}

std::size_t Increment2::offset(std::size_t i, std::size_t j) const {
  const std::size_t n = grid_.size();
  if (i > j || j >= n) {
    throw DomainError("Increment2 index (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside s <= t on a grid of " + std::to_string(n) + " points");
  }
  return (i * (2 * n - i + 1) / 2 + (j - i)) * dim_;
}

Eigen::Map<const Eigen::VectorXd> Increment2::at(std::size_t i, std::size_t j) const {
  return Eigen::Map<const Eigen::VectorXd>(data_.data() + offset(i, j), static_cast<Eigen::Index>(dim_));
}

void Increment2::set(std::size_t i, std::size_t j, const Eigen::VectorXd& value) {
  if (static_cast<std::size_t>(value.size()) != dim_) throw DomainError("Increment2 value has wrong dimension");
  if (i == j) {
    if (!value.isZero(0.0)) throw DomainError("a 2-increment must vanish on the diagonal");
    return;
  }
  std::copy(value.data(), value.data() + dim_, data_.begin() + static_cast<std::ptrdiff_t>(offset(i, j)));
}

Increment2& Increment2::operator+=(const Increment2& other) {
  if (!(grid_ == other.grid_) || dim_ != other.dim_) throw DomainError("Increment2 shapes differ");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Increment2& Increment2::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

Increment3::Increment3(TimeGrid grid, std::size_t dim, Closure fn, bool continuous)
    : grid_(grid), dim_(dim), fn_(std::move(fn)), continuous_(continuous) {}

Increment2 delta1(const Increment1& g) {
  return Increment2::from_function(g.grid(), g.dim(), [&](std::size_t i, std::size_t j) {
    return Eigen::VectorXd(g.at(j) - g.at(i));
  });
}

Increment3 delta2(const Increment2& h) {
  // Captures a copy so the result does not dangle.
  auto fn = [h](double s, double u, double t) -> Eigen::VectorXd {
    const auto& grid = h.grid();
    const std::size_t i = grid.index_of(s);
    const std::size_t j = grid.index_of(u);
    const std::size_t k = grid.index_of(t);
    return h.at(i, k) - h.at(i, j) - h.at(j, k);
  };
  return Increment3(h.grid(), h.dim(), std::move(fn), false);
}

double holder_norm(const Increment2& f, double mu) {
  if (!(mu > 0.0)) throw DomainError("Hoelder exponent must be positive");
  double best = 0.0;
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      best = std::max(best, f.at(i, j).norm() / std::pow(grid[j] - grid[i], mu));
  return best;
}

double sup_norm(const Increment2& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) best = std::max(best, f.at(i, j).norm());
  return best;
}

double sup_norm(const Increment1& g) { return g.values().rowwise().norm().maxCoeff(); }

double holder_norm(const Increment1& g, double mu) {
  if (!(mu > 0.0)) throw DomainError("Hoelder exponent must be positive");
  const auto& grid = g.grid();
  const auto& v = g.values();
  const std::size_t n = grid.size();
  // Powers of the lag only depend on j - i on a uniform grid.
  std::vector<double> inv_pow(n);
  for (std::size_t lag = 1; lag < n; ++lag) inv_pow[lag] = std::pow(grid[lag], -mu);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double num = (v.row(static_cast<Eigen::Index>(j)) - v.row(static_cast<Eigen::Index>(i))).norm();
      best = std::max(best, num * inv_pow[j - i]);
    }
  return best;
}

double holder_sup_norm(const Increment1& g, double mu) { return holder_norm(g, mu) + sup_norm(g); }

double holder_sup_norm(const Increment2& f, double mu) { return holder_norm(f, mu) + sup_norm(f); }

double split_norm(const Increment3& h, double gamma, double rho) {
  const auto& grid = h.grid();
  const std::size_t n = grid.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const double denom = std::pow(grid[j] - grid[i], gamma) * std::pow(grid[k] - grid[j], rho);
        best = std::max(best, h.at(i, j, k).norm() / denom);
      }
  return best;
}

double sewing_constant(double mu) {
  if (!(mu > 1.0)) throw DomainError("sewing needs mu > 1");
  return 1.0 / (std::pow(2.0, mu) - 2.0);
}

double closedness_defect(const Increment3& h, std::size_t max_quadruples) {
  const std::size_t n = h.grid().size();
  if (n < 4) return 0.0;
  auto defect = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return (h.at(b, c, d) - h.at(a, c, d) + h.at(a, b, d) - h.at(a, b, c)).norm();
  };
  double worst = 0.0;
  const double total = static_cast<double>(n) * (n - 1) * (n - 2) * (n - 3) / 24.0;
  if (total <= static_cast<double>(max_quadruples)) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          for (std::size_t d = c + 1; d < n; ++d) worst = std::max(worst, defect(a, b, c, d));
    return worst;
  }
  CounterRng rng(0x5e3d17ULL, 0, 0);
  for (std::size_t q = 0; q < max_quadruples; ++q) {
    std::array<std::size_t, 4> idx{};
    do {
      for (auto& x : idx) x = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      std::sort(idx.begin(), idx.end());
    } while (idx[0] == idx[1] || idx[1] == idx[2] || idx[2] == idx[3]);
    worst = std::max(worst, defect(idx[0], idx[1], idx[2], idx[3]));
  }
  return worst;
}

Increment2 sewing(const Increment3& h, double mu, SewingOptions options) {
  if (!(mu > 1.0)) throw DomainError("sewing map requires mu > 1, got " + std::to_string(mu));
  if (options.depth < 0) throw DomainError("sewing depth must be non-negative");
  const double defect = closedness_defect(h, options.max_checked_quadruples);
  if (defect > options.closedness_tol) {
    throw ValidationError("3-increment is not closed: |delta h| reaches " + std::to_string(defect));
  }

  const auto& grid = h.grid();
  const std::size_t n = grid.size();
  const auto dim = static_cast<Eigen::Index>(h.dim());

  std::vector<Eigen::VectorXd> step(n - 1, Eigen::VectorXd::Zero(dim));
  if (h.continuous()) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double a = grid[i];
      const double width = grid[i + 1] - a;
      std::vector<Eigen::VectorXd> levels;
      for (int level = 0; level < options.depth; ++level) {
        const std::size_t pieces = std::size_t{1} << level;
        const double len = width / static_cast<double>(pieces);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
        for (std::size_t j = 0; j < pieces; ++j) {
          const double s = a + len * static_cast<double>(j);
          sum += h(s, s + 0.5 * len, j + 1 == pieces ? grid[i + 1] : s + len);
        }
        step[i] += sum;
        levels.push_back(std::move(sum));
      }
      if (options.geometric_tail && levels.size() >= 3) {
        const auto& c2 = levels[levels.size() - 3];
        const auto& c1 = levels[levels.size() - 2];
        const auto& c0 = levels.back();
        for (Eigen::Index c = 0; c < dim; ++c) {
          if (c2(c) == 0.0 || c1(c) == 0.0) continue;
          const double r = c0(c) / c1(c), r_prev = c1(c) / c2(c);
          if (r > 0.0 && r < 1.0 && std::abs(r - r_prev) <= 1e-3 * r) step[i](c) += c0(c) * r / (1.0 - r);
        }
      }
    }
  }

  Increment2 out(grid, h.dim());
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (std::size_t j = i + 1; j < n; ++j) {
      acc += step[j - 1];
      if (j - 1 > i) acc += h.at(i, j - 1, j);
      out.set(i, j, acc);
    }
  }
  return out;
}

double product_rule_defect(const Increment2& g, const Increment1& h) {
  const std::size_t d = h.dim();
  if (g.dim() % d != 0) {
    throw DomainError("product rule needs g of shape l x d with d = dim(h)");
  }
  if (!(g.grid() == h.grid())) throw DomainError("product rule operands live on different grids");
  const auto l = static_cast<Eigen::Index>(g.dim() / d);
  const auto dd = static_cast<Eigen::Index>(d);
  auto mat = [&](std::size_t i, std::size_t j) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        g.at(i, j).data(), l, dd);
  };
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = s; u < n; ++u)
      for (std::size_t t = u; t < n; ++t) {
        const Eigen::VectorXd hu = h.at(u);
        const Eigen::VectorXd ht = h.at(t);
        const Eigen::VectorXd lhs = mat(s, t) * ht - mat(s, u) * hu - mat(u, t) * ht;
        const Eigen::VectorXd dg_h = (mat(s, t) - mat(s, u) - mat(u, t)) * ht;
        const Eigen::VectorXd g_dh = mat(s, u) * (ht - hu);
        worst = std::max(worst, (lhs - (dg_h + g_dh)).norm());
      }
  return worst;
}

double delta_delta_defect(const Increment1& g) {
  const std::size_t n = g.grid().size();
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = s; u < n; ++u)
      for (std::size_t t = u; t < n; ++t) {
        const Eigen::VectorXd d = (g.at(t) - g.at(s)) - (g.at(u) - g.at(s)) - (g.at(t) - g.at(u));
        worst = std::max(worst, d.norm());
      }
  return worst;
}

}  // namespace roughkit
