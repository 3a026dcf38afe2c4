#pragma once

#include "roughkit/grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace roughkit {

/// A vector-valued function of one time on a grid (an element of C_1).
class Increment1 {
 public:
  Increment1(TimeGrid grid, Eigen::MatrixXd values);  // rows = grid points
  static Increment1 from_path(const SamplePath& path);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd at(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)).transpose(); }

 private:
  TimeGrid grid_;
  Eigen::MatrixXd values_;
};

/// A vector-valued function of grid pairs s <= t (an element of C_2).
/// Stored upper-triangular; the diagonal is zero by construction.
class Increment2 {
 public:
  Increment2(TimeGrid grid, std::size_t dim);

  template <class Fn>  // Fn(i, j) -> Eigen::VectorXd, called for i < j
  static Increment2 from_function(TimeGrid grid, std::size_t dim, Fn&& fn) {
    Increment2 out(grid, dim);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j) out.set(i, j, fn(i, j));
    return out;
  }

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  Eigen::Map<const Eigen::VectorXd> at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Eigen::VectorXd& value);

  Increment2& operator+=(const Increment2& other);
  Increment2& operator*=(double factor);
  friend Increment2 operator+(Increment2 a, const Increment2& b) { return a += b; }
  friend Increment2 operator-(Increment2 a, const Increment2& b) { return a += b * -1.0; }
  friend Increment2 operator*(Increment2 a, double f) { return a *= f; }
  friend Increment2 operator*(double f, Increment2 a) { return a *= f; }

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// A function of triples s <= u <= t (an element of C_3), evaluated lazily.
/// If the closure accepts arbitrary times in [0, T] the increment is
/// `continuous` and the sewing map may refine below the grid mesh.
class Increment3 {
 public:
  using Closure = std::function<Eigen::VectorXd(double s, double u, double t)>;

  Increment3(TimeGrid grid, std::size_t dim, Closure fn, bool continuous);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  bool continuous() const { return continuous_; }

  Eigen::VectorXd operator()(double s, double u, double t) const { return fn_(s, u, t); }
  Eigen::VectorXd at(std::size_t i, std::size_t j, std::size_t k) const {
    return fn_(grid_[i], grid_[j], grid_[k]);
  }

 private:
  TimeGrid grid_;
  std::size_t dim_;
  Closure fn_;
  bool continuous_;
};

/// (delta g)_{st} = g_t - g_s.
Increment2 delta1(const Increment1& g);
/// (delta h)_{sut} = h_{st} - h_{su} - h_{ut}, on grid triples.
Increment3 delta2(const Increment2& h);

/// sup over grid pairs s < t of |f_{st}| / |t - s|^mu (Euclidean norm).
double holder_norm(const Increment2& f, double mu);
/// sup over grid pairs of |f_{st}|.
double sup_norm(const Increment2& f);
/// sup over grid points of |g_t|.
double sup_norm(const Increment1& g);
/// Hoelder norm of the path g, i.e. holder_norm(delta1(g), mu), without
/// materialising the 2-increment.
double holder_norm(const Increment1& g, double mu);
/// ||g||_{mu,inf} = ||delta g||_mu + ||g||_inf.
double holder_sup_norm(const Increment1& g, double mu);
/// ||f||_{mu,inf} = ||f||_mu + ||f||_inf for a 2-increment.
double holder_sup_norm(const Increment2& f, double mu);
/// Single-split norm sup |h_{sut}| / (|u-s|^gamma |t-u|^rho) over grid triples.
double split_norm(const Increment3& h, double gamma, double rho);

struct SewingOptions {
  int depth = 12;                  // dyadic levels below each grid step
  double closedness_tol = 1e-10;   // tolerance of the delta h = 0 check
  std::size_t max_checked_quadruples = 20000;
  /// Add the geometric tail c_k r / (1 - r) of the level series when the last
  /// three level sums of a component have a common ratio r in (0, 1).
  bool geometric_tail = false;
};

/// The sewing map: returns L with delta L = h on all grid triples.
///
/// Values on consecutive grid pairs are the dyadic midpoint series
/// sum_k sum_j h(t^k_j, t^{k+1}_{2j+1}, t^k_{j+1}) truncated after `depth`
/// levels (zero for increments that are only known on the grid); every
/// other pair follows from L_{s t_{i+1}} = L_{s t_i} + L_{t_i t_{i+1}} +
/// h_{s t_i t_{i+1}}, which is exact for closed h.
///
/// Throws DomainError if mu <= 1 and ValidationError if h is not closed.
Increment2 sewing(const Increment3& h, double mu, SewingOptions options = {});

/// Operator-norm bound of the sewing map, 1 / (2^mu - 2).
double sewing_constant(double mu);

/// Largest |delta h| over (a deterministic sample of) grid quadruples.
double closedness_defect(const Increment3& h, std::size_t max_quadruples = 20000);

/// max over grid triples of | delta(gh) - (delta g h + g delta h) |, where
/// (gh)_{st} = g_{st} h_t and g is l x d valued (flattened row-major).
double product_rule_defect(const Increment2& g, const Increment1& h);

/// max over grid triples of |delta(delta1 g)|.
double delta_delta_defect(const Increment1& g);

}  // namespace roughkit
