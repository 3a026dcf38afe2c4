#pragma once

#include "roughkit/grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace roughkit {

/// A word over the alphabet {0, ..., d-1}. Letters are zero-based in code;
/// text and JSON output use one-based letters.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) {}
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
  /// From one-based letters, e.g. {2, 3} -> zero-based {1, 2}.
  static Word one_based(std::initializer_list<int> letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  std::span<const int> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  /// Dense index of the word among words of the same length over an
  /// alphabet of size `dim` (first letter most significant).
  std::size_t index(std::size_t dim) const;
  static Word from_index(std::size_t index, std::size_t length, std::size_t dim);
  /// All words of a given length, in index order.
  static std::vector<Word> all(std::size_t length, std::size_t dim);

  std::string to_string() const;  // one-based, e.g. "(2,3)"
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

 private:
  std::vector<int> letters_;
};

/// Truncated signature of a path over [start, end]: the iterated integrals
/// S^w = int_{start < u_1 < ... < u_k < end} dX^{w_1}_{u_1} ... dX^{w_k}_{u_k}
/// for all words w of length 1..level. The empty word has value 1.
class IteratedIntegrals {
 public:
  /// The identity element (all levels zero) on [start, end].
  IteratedIntegrals(std::size_t dim, std::size_t level, double start, double end);

  std::size_t dim() const { return dim_; }
  std::size_t level() const { return levels_.size(); }
  double start() const { return start_; }
  double end() const { return end_; }

  double operator[](const Word& w) const;
  double& operator[](const Word& w);
  std::span<const double> level_values(std::size_t k) const { return levels_.at(k - 1); }
  std::span<double> level_values(std::size_t k) { return levels_.at(k - 1); }
  /// Coefficient with the empty word allowed (returns 1).
  double coefficient(std::span<const int> letters) const;

  /// Level-1 entries as a vector, B^1_{st}.
  Eigen::VectorXd level1() const;
  /// Level-2 entries as a d x d matrix, B^2_{st}(i, j) = S^{ij}.
  Eigen::MatrixXd level2() const;

  /// Truncated to a lower level.
  IteratedIntegrals truncated(std::size_t level) const;
  /// Same values over a relabelled interval.
  IteratedIntegrals relabelled(double start, double end) const;

 private:
  std::size_t dim_;
  double start_;
  double end_;
  std::vector<std::vector<double>> levels_;
};

/// Signature of the straight segment with increment v: the tensor
/// exponential, S^w = prod_j v_{w_j} / k!.
IteratedIntegrals segment_signature(const Eigen::VectorXd& v, std::size_t level, double start = 0.0,
                                    double end = 1.0);

/// Chen product of signatures over adjacent intervals [s,u] and [u,t].
/// Throws DomainError if the intervals do not meet or the shapes differ.
IteratedIntegrals chen_concat(const IteratedIntegrals& a, const IteratedIntegrals& b);

/// In-place right multiplication by the exponential of a segment increment;
/// equivalent to a = chen_concat(a, segment_signature(v, ...)).
void extend_by_segment(IteratedIntegrals& a, const Eigen::VectorXd& v, double new_end);

/// Exact signature of the piecewise-linear interpolation of `path` on
/// [s, t]; both times must lie on the grid with s < t.
IteratedIntegrals path_signature(const SamplePath& path, double s, double t, std::size_t level);
IteratedIntegrals path_signature_indices(const SamplePath& path, std::size_t i, std::size_t j,
                                         std::size_t level);

/// S_{0, t_k} for every grid index k (k = 0 gives the identity).
std::vector<IteratedIntegrals> prefix_signatures(const SamplePath& path, std::size_t level);
/// S_{t_k, t_end} for every k <= end_index.
std::vector<IteratedIntegrals> suffix_signatures(const SamplePath& path, std::size_t end_index,
                                                 std::size_t level);

/// The level-2 matrix B^2_{st}.
Eigen::MatrixXd levy_area(const SamplePath& path, double s, double t);

/// max over grid triples of |B^2_{st} - B^2_{su} - B^2_{ut} - B^1_{su} (x) B^1_{ut}|.
double chen_defect_level2(const SamplePath& path);

}  // namespace roughkit
