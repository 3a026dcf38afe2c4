#include "roughkit/strichartz.hpp"

#include "roughkit/error.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>

namespace roughkit {

int descent_count(std::span<const int> sigma) {
  std::vector<int> sorted(sigma.begin(), sigma.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i) + 1) throw DomainError("not a permutation of {1..k}");
  }
  int e = 0;
  for (std::size_t j = 0; j + 1 < sigma.size(); ++j)
    if (sigma[j] > sigma[j + 1]) ++e;
  return e;
}

double strichartz_coefficient(std::span<const int> sigma) {
  const int e = descent_count(sigma);
  const auto k = static_cast<int>(sigma.size());
  double binom = 1.0;
  for (int i = 1; i <= e; ++i) binom = binom * (k - 1 - e + i) / i;
  const double sign = e % 2 == 0 ? 1.0 : -1.0;
  return sign / (static_cast<double>(k) * k * binom);
}

const std::vector<PermutationTerm>& permutation_terms(std::size_t k) {
  constexpr std::size_t kMax = 8;
  if (k == 0 || k > kMax) throw DomainError("permutation tables exist for 1 <= k <= 8");
  static std::array<std::vector<PermutationTerm>, kMax + 1> tables;
  static std::array<std::once_flag, kMax + 1> flags;
  std::call_once(flags[k], [k] {
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 1);
    do {
      PermutationTerm term{std::vector<int>(k), strichartz_coefficient(sigma)};
      for (std::size_t i = 0; i < k; ++i) term.tau[static_cast<std::size_t>(sigma[i] - 1)] = static_cast<int>(i);
      tables[k].push_back(std::move(term));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  });
  return tables[k];
}

double psi(const IteratedIntegrals& sig, const Word& word) {
  const std::size_t k = word.size();
  if (k == 0) throw DomainError("psi of the empty word");
  if (k > sig.level()) {
    throw DomainError("word " + word.to_string() + " is longer than the signature level " + std::to_string(sig.level()));
  }
  std::vector<int> permuted(k);
  double sum = 0.0;
  for (const auto& term : permutation_terms(k)) {
    for (std::size_t i = 0; i < k; ++i) permuted[i] = word[static_cast<std::size_t>(term.tau[i])];
    sum += term.coeff * sig.coefficient(permuted);
  }
  return sum;
}

double psi_derivative(const IteratedIntegrals& sig_0u, const IteratedIntegrals& sig_ut, const Word& word, int j) {
  const std::size_t k = word.size();
  if (k == 0) throw DomainError("psi of the empty word");
  if (k > sig_0u.level() || k > sig_ut.level()) throw DomainError("word longer than the signature level");
  std::vector<int> permuted(k);
  double sum = 0.0;
  for (const auto& term : permutation_terms(k)) {
    for (std::size_t i = 0; i < k; ++i) permuted[i] = word[static_cast<std::size_t>(term.tau[i])];
    double d = 0.0;
    const std::span<const int> v(permuted);
    for (std::size_t l = 0; l < k; ++l) {
      if (v[l] != j) continue;
      d += sig_0u.coefficient(v.first(l)) * sig_ut.coefficient(v.subspan(l + 1));
    }
    sum += term.coeff * d;
  }
  return sum;
}

// ---------------------------------------------------------------------------

StrichartzRepresentation::StrichartzRepresentation(FieldList fields, std::size_t n, StrichartzOptions options)
    : fields_(std::move(fields)), n_(n), m_(roughkit::state_dim(fields_)), hash_(fields_hash(fields_)) {
  if (n < 2) throw DomainError("nilpotency order must be at least 2");
  if (!options.assume_nilpotent) {
    const auto check = is_nilpotent(fields_, n);
    if (!check) {
      throw PreconditionError("fields are not nilpotent of order " + std::to_string(n) + ": bracket " +
                              check.witness->to_string() + " does not vanish");
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    const auto all = brackets_of_length(fields_, k);
    for (std::size_t w = 0; w < all.size(); ++w) {
      if (all[w].is_zero()) continue;
      words_.push_back(Word::from_index(w, k, fields_.size()));
      brackets_.push_back(all[w]);
    }
  }
  std::vector<std::vector<Polynomial>> comps;
  for (const auto& b : brackets_) comps.push_back(b.components());
  const auto basis = monomial_basis(comps);
  for (const auto& b : brackets_) compiled_.push_back(b.compile(basis));
  if (compiled_.empty()) compiled_.push_back(PolyVectorField::zero(m_).compile(basis));
}

std::vector<double> StrichartzRepresentation::psi_values(const IteratedIntegrals& sig) const {
  if (sig.level() < level()) throw DomainError("signature level below n - 1");
  if (sig.dim() != driver_dim()) throw DomainError("signature dimension differs from the number of fields");
  std::vector<double> out;
  out.reserve(words_.size());
  for (const auto& w : words_) out.push_back(psi(sig, w));
  return out;
}

FlowField StrichartzRepresentation::assemble(const std::vector<double>& weights, double t) const {
  FlowField f;
  f.t = t;
  f.fields_hash = hash_;
  if (words_.empty()) {
    f.z = compiled_.front();
    return f;
  }
  std::vector<const NumericField*> ptrs;
  for (const auto& c : compiled_) ptrs.push_back(&c);
  f.z = NumericField::combine(ptrs, weights);
  return f;
}

FlowField StrichartzRepresentation::build_Z(const IteratedIntegrals& sig) const {
  return assemble(psi_values(sig), sig.end());
}

Eigen::VectorXd StrichartzRepresentation::solve(const IteratedIntegrals& sig, const Eigen::VectorXd& a, int steps) const {
  return exp_flow(build_Z(sig), a, steps);
}

Eigen::VectorXd StrichartzRepresentation::solve(const SamplePath& path, const Eigen::VectorXd& a, double t, int steps) const {
  if (path.grid().index_of(t) == 0) return a;
  return solve(path_signature(path, 0.0, t, level()), a, steps);
}

FlowField build_Z(const FieldList& fields, const IteratedIntegrals& sig, std::size_t n, StrichartzOptions options) {
  return StrichartzRepresentation(fields, n, options).build_Z(sig);
}

Eigen::VectorXd exp_flow(const FlowField& z, const Eigen::VectorXd& a, int steps) {
  if (steps < 1) throw DomainError("exp_flow needs at least one step");
  const double h = 1.0 / steps;
  Eigen::VectorXd y = a;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = z(y);
    const Eigen::VectorXd k2 = z(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = z(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = z(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) throw BlowUpError("exponential flow is no longer finite", (k + 1) * h);
  }
  return y;
}

Eigen::VectorXd strichartz_solve(const FieldList& fields, const SamplePath& path, const Eigen::VectorXd& a, double t,
                                 std::size_t n, int steps) {
  return StrichartzRepresentation(fields, n).solve(path, a, t, steps);
}

}  // namespace roughkit
