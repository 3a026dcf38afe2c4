#include "roughkit/controlled.hpp"

#include "roughkit/error.hpp"

#include <cmath>
#include <string>

namespace roughkit {

RoughDriver::RoughDriver(TimeGrid grid, std::vector<Eigen::VectorXd> step1, std::vector<Eigen::MatrixXd> step2)
    : grid_(grid), dim_(0), step1_(std::move(step1)), step2_(std::move(step2)) {
  if (step1_.size() != grid_.steps() || step2_.size() != grid_.steps()) {
    throw DomainError("rough driver needs one (B^1, B^2) pair per grid step");
  }
  dim_ = static_cast<std::size_t>(step1_.front().size());
  if (dim_ == 0) throw DomainError("rough driver dimension must be positive");
  const auto d = static_cast<Eigen::Index>(dim_);
  prefix1_.assign(grid_.size(), Eigen::VectorXd::Zero(d));
  prefix2_.assign(grid_.size(), Eigen::MatrixXd::Zero(d, d));
  for (std::size_t k = 0; k < grid_.steps(); ++k) {
    if (step1_[k].size() != d || step2_[k].rows() != d || step2_[k].cols() != d) {
      throw DomainError("rough driver step " + std::to_string(k) + " has the wrong shape");
    }
    prefix1_[k + 1] = prefix1_[k] + step1_[k];
    prefix2_[k + 1] = prefix2_[k] + step2_[k] + prefix1_[k] * step1_[k].transpose();
  }
}

RoughDriver RoughDriver::piecewise_linear(const SamplePath& path) {
  std::vector<Eigen::VectorXd> s1;
  std::vector<Eigen::MatrixXd> s2;
  s1.reserve(path.size() - 1);
  s2.reserve(path.size() - 1);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    Eigen::VectorXd v = path.increment(k, k + 1);
    s2.emplace_back(0.5 * v * v.transpose());
    s1.push_back(std::move(v));
  }
  return RoughDriver(path.grid(), std::move(s1), std::move(s2));
}

Eigen::VectorXd RoughDriver::x1(std::size_t i, std::size_t j) const {
  if (i > j || j >= size()) throw DomainError("driver index pair out of range");
  return prefix1_[j] - prefix1_[i];
}

Eigen::MatrixXd RoughDriver::x2(std::size_t i, std::size_t j) const {
  if (i > j || j >= size()) throw DomainError("driver index pair out of range");
  if (j == i + 1) return step2_[i];
  if (j == i) return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  return prefix2_[j] - prefix2_[i] - prefix1_[i] * (prefix1_[j] - prefix1_[i]).transpose();
}

RoughDriver RoughDriver::coarsened(std::size_t stride) const {
  if (stride == 0 || grid_.steps() % stride != 0) {
    throw DomainError("coarsening stride must divide the number of steps");
  }
  std::vector<Eigen::VectorXd> s1;
  std::vector<Eigen::MatrixXd> s2;
  for (std::size_t k = 0; k < grid_.steps(); k += stride) {
    // Compose the fine steps with Chen's relation to keep the values exact.
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t q = k; q < k + stride; ++q) {
      b += step2_[q] + a * step1_[q].transpose();
      a += step1_[q];
    }
    s1.push_back(std::move(a));
    s2.push_back(std::move(b));
  }
  return RoughDriver(TimeGrid(grid_.horizon(), grid_.steps() / stride + 1), std::move(s1), std::move(s2));
}

// ---------------------------------------------------------------------------

ControlledPath::ControlledPath(std::shared_ptr<const RoughDriver> driver, Eigen::MatrixXd z,
                               std::vector<Eigen::MatrixXd> zeta)
    : driver_(std::move(driver)), z_(std::move(z)), zeta_(std::move(zeta)) {
  if (!driver_) throw DomainError("controlled path needs a driver");
  if (static_cast<std::size_t>(z_.rows()) != driver_->size() || zeta_.size() != driver_->size()) {
    throw DomainError("controlled path does not match the driver grid");
  }
  for (const auto& m : zeta_) {
    if (m.rows() != z_.cols() || static_cast<std::size_t>(m.cols()) != driver_->dim()) {
      throw DomainError("Gubinelli derivative must be m x d");
    }
  }
}

Eigen::VectorXd ControlledPath::remainder(std::size_t i, std::size_t j) const {
  return z(j) - z(i) - zeta_[i] * driver_->x1(i, j);
}

Increment2 ControlledPath::remainder_increment() const {
  return Increment2::from_function(grid(), dim(), [&](std::size_t i, std::size_t j) { return remainder(i, j); });
}

// ---------------------------------------------------------------------------

namespace {

// Compensated local term z_u (x) B^1_{uu'} + zeta_u B^2_{uu'}, flattened a * d + j.
void add_local(const ControlledPath& z, std::size_t i, std::size_t j, Eigen::VectorXd& acc) {
  const auto& drv = z.driver();
  const auto m = static_cast<Eigen::Index>(z.dim());
  const auto d = static_cast<Eigen::Index>(drv.dim());
  const Eigen::VectorXd b1 = drv.x1(i, j);
  const Eigen::MatrixXd b2 = drv.x2(i, j);
  const Eigen::VectorXd zu = z.z(i);
  const Eigen::MatrixXd local = zu * b1.transpose() + z.zeta(i) * b2;  // m x d
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index jj = 0; jj < d; ++jj) acc(a * d + jj) += local(a, jj);
}

}  // namespace

RoughIntegral rough_integral(const ControlledPath& z, double s, double t, RoughIntegralOptions options) {
  const auto& grid = z.grid();
  const std::size_t i0 = grid.index_of(s);
  const std::size_t i1 = grid.index_of(t);
  if (!(i0 < i1)) throw DomainError("rough_integral needs s < t");
  const std::size_t m = z.dim();
  const std::size_t d = z.driver().dim();
  const auto md = static_cast<Eigen::Index>(m * d);

  // Nested dyadic sub-grids of [s, t]: strides 2^k dividing the span.
  const std::size_t span = i1 - i0;
  std::vector<std::size_t> strides;
  for (std::size_t stride = 1; stride <= span && span % stride == 0; stride *= 2) strides.push_back(stride);

  std::vector<Eigen::VectorXd> refinements;
  for (auto it = strides.rbegin(); it != strides.rend(); ++it) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(md);
    for (std::size_t k = i0; k < i1; k += *it) add_local(z, k, k + *it, acc);
    refinements.push_back(std::move(acc));
  }
  const Eigen::VectorXd value = refinements.back();

  const std::size_t levels = refinements.size();
  if (levels >= 3) {
    std::vector<double> changes;
    for (std::size_t k = 1; k < levels; ++k) changes.push_back((refinements[k] - refinements[k - 1]).norm());
    const double last = changes.back();
    double coarser = 0.0;
    for (std::size_t k = 0; k + 1 < changes.size(); ++k) coarser = std::max(coarser, changes[k]);
    const double scale = std::max(value.norm(), 1e-300);
    if (last > options.tolerance * scale && last > coarser) {
      throw ConvergenceError("compensated sums diverge under refinement: last change " + std::to_string(last) +
                             " exceeds all coarser changes (max " + std::to_string(coarser) + ")");
    }
  }

  // Indefinite integral from t_0 on the whole grid.
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z.size()), md);
  std::vector<Eigen::MatrixXd> zeta(z.size(), Eigen::MatrixXd::Zero(md, static_cast<Eigen::Index>(d)));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(md);
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k > 0) {
      add_local(z, k - 1, k, acc);
      values.row(static_cast<Eigen::Index>(k)) = acc.transpose();
    }
    const Eigen::VectorXd zk = z.z(k);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < d; ++j)
        zeta[k](static_cast<Eigen::Index>(a * d + j), static_cast<Eigen::Index>(j)) = zk(static_cast<Eigen::Index>(a));
  }
  return RoughIntegral{value, ControlledPath(z.driver_ptr(), std::move(values), std::move(zeta)),
                       std::move(refinements)};
}

double contracted_integral(const RoughIntegral& integral, std::size_t m, std::size_t d) {
  if (m != d || static_cast<std::size_t>(integral.value.size()) != m * d) {
    throw DomainError("contraction needs an integrand with one component per driver direction");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) sum += integral.value(static_cast<Eigen::Index>(j * d + j));
  return sum;
}

// ---------------------------------------------------------------------------

RdeSolution rde_solve(const FieldList& fields, const Eigen::VectorXd& a, std::shared_ptr<const RoughDriver> driver) {
  if (!driver) throw DomainError("rde_solve needs a driver");
  const std::size_t m = state_dim(fields);
  const std::size_t d = fields.size();
  if (driver->dim() != d) {
    throw DomainError("driver has " + std::to_string(driver->dim()) + " components but there are " +
                      std::to_string(d) + " vector fields");
  }
  if (static_cast<std::size_t>(a.size()) != m) throw DomainError("initial condition has the wrong dimension");

  std::vector<NumericField> compiled;
  compiled.reserve(d);
  for (const auto& f : fields) compiled.push_back(f.compile());

  const std::size_t n = driver->size();
  const auto mm = static_cast<Eigen::Index>(m);
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), mm);
  std::vector<Eigen::MatrixXd> zeta(n, Eigen::MatrixXd(mm, dd));

  Eigen::VectorXd y = a;
  std::vector<Eigen::VectorXd> v(d);
  for (std::size_t k = 0;; ++k) {
    values.row(static_cast<Eigen::Index>(k)) = y.transpose();
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = compiled[i](y);
      zeta[k].col(static_cast<Eigen::Index>(i)) = v[i];
    }
    if (k + 1 == n) break;
    const Eigen::VectorXd& b1 = driver->step1(k);
    const Eigen::MatrixXd& b2 = driver->step2(k);
    Eigen::VectorXd next = y;
    for (std::size_t i = 0; i < d; ++i) next += v[i] * b1(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < d; ++j) {
      const Eigen::MatrixXd grad = compiled[j].jacobian(y);
      for (std::size_t i = 0; i < d; ++i) {
        const double w = b2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (w != 0.0) next += (grad * v[i]) * w;
      }
    }
    if (!next.allFinite()) throw BlowUpError("RDE solution is no longer finite", driver->grid()[k + 1]);
    y = std::move(next);
  }
  return RdeSolution{values, ControlledPath(std::move(driver), values, std::move(zeta))};
}

// ---------------------------------------------------------------------------

ControlledNorm controlled_norm(const ControlledPath& z, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("controlled norm exponent must lie in (0, 1)");
  ControlledNorm out{};
  out.kappa = kappa;
  out.z_part = holder_norm(z.as_increment(), kappa);
  const auto m = static_cast<Eigen::Index>(z.dim());
  const std::size_t d = z.driver().dim();
  for (std::size_t j = 0; j < d; ++j) {
    Eigen::MatrixXd col(static_cast<Eigen::Index>(z.size()), m);
    for (std::size_t k = 0; k < z.size(); ++k)
      col.row(static_cast<Eigen::Index>(k)) = z.zeta(k).col(static_cast<Eigen::Index>(j)).transpose();
    out.zeta_part += holder_sup_norm(Increment1(z.grid(), std::move(col)), kappa);
  }
  out.remainder_part = holder_norm(z.remainder_increment(), 2.0 * kappa);
  out.value = out.z_part + out.zeta_part + out.remainder_part;
  return out;
}

}  // namespace roughkit
