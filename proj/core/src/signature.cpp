#include "roughkit/signature.hpp"

#include "roughkit/error.hpp"

#include <cmath>
#include <string>

namespace roughkit {

Word Word::one_based(std::initializer_list<int> letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (l < 1) throw DomainError("one-based letters start at 1");
    out.push_back(l - 1);
  }
  return Word(std::move(out));
}

std::size_t Word::index(std::size_t dim) const {
  std::size_t idx = 0;
  for (int l : letters_) {
    if (l < 0 || static_cast<std::size_t>(l) >= dim) {
      throw DomainError("letter " + std::to_string(l + 1) + " outside alphabet of size " +
                        std::to_string(dim));
    }
    idx = idx * dim + static_cast<std::size_t>(l);
  }
  return idx;
}

Word Word::from_index(std::size_t index, std::size_t length, std::size_t dim) {
  std::vector<int> letters(length);
  for (std::size_t k = length; k-- > 0;) {
    letters[k] = static_cast<int>(index % dim);
    index /= dim;
  }
  return Word(std::move(letters));
}

std::vector<Word> Word::all(std::size_t length, std::size_t dim) {
  std::size_t count = 1;
  for (std::size_t k = 0; k < length; ++k) count *= dim;
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(from_index(i, length, dim));
  return out;
}

std::string Word::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < letters_.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(letters_[k] + 1);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

IteratedIntegrals::IteratedIntegrals(std::size_t dim, std::size_t level, double start, double end)
    : dim_(dim), start_(start), end_(end) {
  if (dim == 0) throw DomainError("signature dimension must be positive");
  if (level == 0) throw DomainError("signature level must be at least 1");
  std::size_t width = 1;
  levels_.resize(level);
  for (std::size_t k = 0; k < level; ++k) {
    width *= dim;
    levels_[k].assign(width, 0.0);
  }
}

double IteratedIntegrals::operator[](const Word& w) const {
  if (w.empty() || w.size() > level()) {
    throw DomainError("word " + w.to_string() + " has no entry at level " + std::to_string(level()));
  }
  return levels_[w.size() - 1][w.index(dim_)];
}

double& IteratedIntegrals::operator[](const Word& w) {
  if (w.empty() || w.size() > level()) {
    throw DomainError("word " + w.to_string() + " has no entry at level " + std::to_string(level()));
  }
  return levels_[w.size() - 1][w.index(dim_)];
}

double IteratedIntegrals::coefficient(std::span<const int> letters) const {
  if (letters.empty()) return 1.0;
  if (letters.size() > level()) throw DomainError("word longer than the signature level");
  std::size_t idx = 0;
  for (int l : letters) idx = idx * dim_ + static_cast<std::size_t>(l);
  return levels_[letters.size() - 1][idx];
}

Eigen::VectorXd IteratedIntegrals::level1() const {
  return Eigen::Map<const Eigen::VectorXd>(levels_[0].data(), static_cast<Eigen::Index>(dim_));
}

Eigen::MatrixXd IteratedIntegrals::level2() const {
  if (level() < 2) throw DomainError("signature is truncated below level 2");
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = levels_[1][static_cast<std::size_t>(i * d + j)];
  return m;
}

IteratedIntegrals IteratedIntegrals::truncated(std::size_t level) const {
  if (level == 0 || level > this->level()) throw DomainError("invalid truncation level");
  IteratedIntegrals out(dim_, level, start_, end_);
  for (std::size_t k = 0; k < level; ++k) out.levels_[k] = levels_[k];
  return out;
}

IteratedIntegrals IteratedIntegrals::relabelled(double start, double end) const {
  IteratedIntegrals out = *this;
  out.start_ = start;
  out.end_ = end;
  return out;
}

// ---------------------------------------------------------------------------

IteratedIntegrals segment_signature(const Eigen::VectorXd& v, std::size_t level, double start,
                                    double end) {
  const auto d = static_cast<std::size_t>(v.size());
  IteratedIntegrals out(d, level, start, end);
  auto l1 = out.level_values(1);
  for (std::size_t i = 0; i < d; ++i) l1[i] = v(static_cast<Eigen::Index>(i));
  for (std::size_t k = 2; k <= level; ++k) {
    auto prev = out.level_values(k - 1);
    auto cur = out.level_values(k);
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t p = 0; p < prev.size(); ++p)
      for (std::size_t i = 0; i < d; ++i) cur[p * d + i] = prev[p] * l1[i] * inv_k;
  }
  return out;
}

IteratedIntegrals chen_concat(const IteratedIntegrals& a, const IteratedIntegrals& b) {
  if (a.dim() != b.dim() || a.level() != b.level()) {
    throw DomainError("Chen product of signatures with different shapes");
  }
  const double scale = std::max({1.0, std::abs(a.end()), std::abs(b.start())});
  if (std::abs(a.end() - b.start()) > 1e-12 * scale) {
    throw DomainError("Chen product needs adjacent intervals, got [" + std::to_string(a.start()) + ", " +
                      std::to_string(a.end()) + "] and [" + std::to_string(b.start()) + ", " +
                      std::to_string(b.end()) + "]");
  }
  IteratedIntegrals out(a.dim(), a.level(), a.start(), b.end());
  for (std::size_t k = 1; k <= a.level(); ++k) {
    auto cur = out.level_values(k);
    const auto ak = a.level_values(k);
    const auto bk = b.level_values(k);
    for (std::size_t w = 0; w < cur.size(); ++w) cur[w] = ak[w] + bk[w];
    for (std::size_t j = 1; j < k; ++j) {
      const auto aj = a.level_values(j);
      const auto bj = b.level_values(k - j);
      for (std::size_t p = 0; p < aj.size(); ++p) {
        const double x = aj[p];
        if (x == 0.0) continue;
        double* dst = cur.data() + p * bj.size();
        for (std::size_t q = 0; q < bj.size(); ++q) dst[q] += x * bj[q];
      }
    }
  }
  return out;
}

void extend_by_segment(IteratedIntegrals& a, const Eigen::VectorXd& v, double new_end) {
  const IteratedIntegrals e = segment_signature(v, a.level(), a.end(), new_end);
  a = chen_concat(a, e);
}

namespace {

IteratedIntegrals fold(const SamplePath& path, std::size_t i, std::size_t j, std::size_t level) {
  const auto& grid = path.grid();
  IteratedIntegrals acc(path.dim(), level, grid[i], grid[i]);
  for (std::size_t k = i; k < j; ++k) extend_by_segment(acc, path.increment(k, k + 1), grid[k + 1]);
  return acc;
}

}  // namespace

IteratedIntegrals path_signature_indices(const SamplePath& path, std::size_t i, std::size_t j,
                                         std::size_t level) {
  if (!(i < j) || j >= path.size()) {
    throw DomainError("path_signature needs grid indices i < j < " + std::to_string(path.size()));
  }
  return fold(path, i, j, level);
}

IteratedIntegrals path_signature(const SamplePath& path, double s, double t, std::size_t level) {
  const std::size_t i = path.grid().index_of(s);
  const std::size_t j = path.grid().index_of(t);
  if (!(i < j)) throw DomainError("path_signature needs s < t");
  return fold(path, i, j, level);
}

std::vector<IteratedIntegrals> prefix_signatures(const SamplePath& path, std::size_t level) {
  const auto& grid = path.grid();
  std::vector<IteratedIntegrals> out;
  out.reserve(path.size());
  out.emplace_back(path.dim(), level, 0.0, 0.0);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    IteratedIntegrals next = out.back();
    extend_by_segment(next, path.increment(k, k + 1), grid[k + 1]);
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<IteratedIntegrals> suffix_signatures(const SamplePath& path, std::size_t end_index,
                                                 std::size_t level) {
  if (end_index >= path.size()) throw DomainError("suffix end index outside the grid");
  const auto& grid = path.grid();
  const double t = grid[end_index];
  std::vector<IteratedIntegrals> out(end_index + 1, IteratedIntegrals(path.dim(), level, t, t));
  for (std::size_t k = end_index; k-- > 0;) {
    out[k] = chen_concat(segment_signature(path.increment(k, k + 1), level, grid[k], grid[k + 1]),
                         out[k + 1]);
  }
  return out;
}

Eigen::MatrixXd levy_area(const SamplePath& path, double s, double t) {
  return path_signature(path, s, t, 2).level2();
}

double chen_defect_level2(const SamplePath& path) {
  const std::size_t n = path.size();
  const auto d = static_cast<Eigen::Index>(path.dim());
  // B^2_{st} for every grid pair, row s folded forward once.
  std::vector<Eigen::MatrixXd> b2(n * n, Eigen::MatrixXd::Zero(d, d));
  for (std::size_t i = 0; i < n; ++i) {
    IteratedIntegrals acc(path.dim(), 2, path.grid()[i], path.grid()[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      extend_by_segment(acc, path.increment(j - 1, j), path.grid()[j]);
      b2[i * n + j] = acc.level2();
    }
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = s + 1; u < n; ++u) {
      const Eigen::VectorXd x_su = path.increment(s, u);
      for (std::size_t t = u + 1; t < n; ++t) {
        const Eigen::MatrixXd defect =
            b2[s * n + t] - b2[s * n + u] - b2[u * n + t] - x_su * path.increment(u, t).transpose();
        worst = std::max(worst, defect.cwiseAbs().maxCoeff());
      }
    }
  return worst;
}

}  // namespace roughkit
