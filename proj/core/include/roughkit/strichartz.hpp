#pragma once

#include "roughkit/liefields.hpp"
#include "roughkit/signature.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace roughkit {

/// Number of descents j with sigma(j) > sigma(j+1). `sigma` lists the
/// one-based images sigma(1), ..., sigma(k). Throws DomainError if it is not
/// a permutation of {1..k}.
int descent_count(std::span<const int> sigma);

/// (-1)^{e(sigma)} / (k^2 * binom(k-1, e(sigma))).
double strichartz_coefficient(std::span<const int> sigma);

/// One term of the psi functional: the coefficient of sigma and the
/// zero-based positions tau = sigma^{-1}, so that the term reads
/// coeff * S^{w_{tau(1)} ... w_{tau(k)}}.
struct PermutationTerm {
  std::vector<int> tau;
  double coeff;
};
/// All k! terms for words of length k (k <= 8), in lexicographic order of sigma.
const std::vector<PermutationTerm>& permutation_terms(std::size_t k);

/// psi^w = sum_sigma coeff(sigma) S^{w o sigma^{-1}} on the signature's interval.
double psi(const IteratedIntegrals& sig, const Word& word);

/// Derivative D^j_u psi^w of psi over [0, t] in the direction of driver
/// component j at time u, given S_{0u} and S_{ut}:
/// D^j_u S^v = sum_{l : v_l = j} S^{v_1..v_{l-1}}_{0u} S^{v_{l+1}..v_k}_{ut}.
double psi_derivative(const IteratedIntegrals& sig_0u, const IteratedIntegrals& sig_ut, const Word& word, int j);

/// Time-frozen vector field Z_t with its provenance.
struct FlowField {
  NumericField z;
  double t = 0.0;
  std::uint64_t fields_hash = 0;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return z(x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const { return z.jacobian(x); }
};

struct StrichartzOptions {
  /// Skip the nilpotency check (the truncated series is then only an approximation).
  bool assume_nilpotent = false;
};

/// Precomputed data of Z_t = sum_{k < n} sum_{|w| = k} V_w psi^w: the
/// non-vanishing left-nested brackets, compiled on one monomial basis.
class StrichartzRepresentation {
 public:
  /// Throws PreconditionError if the fields are not nilpotent of order n.
  StrichartzRepresentation(FieldList fields, std::size_t n, StrichartzOptions options = {});

  const FieldList& fields() const { return fields_; }
  std::size_t order() const { return n_; }
  std::size_t state_dim() const { return m_; }
  std::size_t driver_dim() const { return fields_.size(); }
  std::uint64_t hash() const { return hash_; }
  /// Signature level needed, n - 1.
  std::size_t level() const { return n_ - 1; }

  const std::vector<Word>& words() const { return words_; }
  const std::vector<PolyVectorField>& brackets() const { return brackets_; }
  const std::vector<NumericField>& compiled() const { return compiled_; }

  /// psi^w for every retained word.
  std::vector<double> psi_values(const IteratedIntegrals& sig) const;
  /// Z assembled with the given weights (one per retained word).
  FlowField assemble(const std::vector<double>& weights, double t) const;
  FlowField build_Z(const IteratedIntegrals& sig) const;

  /// y_t = exp(Z_t)(a) with the signature of the piecewise-linear path over [0, t].
  Eigen::VectorXd solve(const SamplePath& path, const Eigen::VectorXd& a, double t, int steps = 256) const;
  Eigen::VectorXd solve(const IteratedIntegrals& sig, const Eigen::VectorXd& a, int steps = 256) const;

 private:
  FieldList fields_;
  std::size_t n_;
  std::size_t m_;
  std::uint64_t hash_;
  std::vector<Word> words_;
  std::vector<PolyVectorField> brackets_;
  std::vector<NumericField> compiled_;
};

FlowField build_Z(const FieldList& fields, const IteratedIntegrals& sig, std::size_t n, StrichartzOptions options = {});

/// Psi_1(a) for dPsi/ds = Z(Psi), Psi_0 = a, by classical RK4 with `steps`
/// uniform steps on [0, 1]. Throws BlowUpError (stamped with s) on a
/// non-finite state.
Eigen::VectorXd exp_flow(const FlowField& z, const Eigen::VectorXd& a, int steps = 256);

Eigen::VectorXd strichartz_solve(const FieldList& fields, const SamplePath& path, const Eigen::VectorXd& a, double t,
                                 std::size_t n, int steps = 256);

}  // namespace roughkit
