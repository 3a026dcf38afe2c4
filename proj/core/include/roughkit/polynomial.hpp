#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace roughkit {

using Rational = boost::multiprecision::cpp_rational;
using Exponents = std::vector<int>;

/// Multivariate polynomial in x1..xm with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t vars = 0) : vars_(vars) {}
  static Polynomial constant(std::size_t vars, const Rational& c);
  /// The coordinate x_{index+1} (zero-based index).
  static Polynomial variable(std::size_t vars, std::size_t index);
  /// Parses e.g. "2*x2 - x1^2/3 + 4"; variables are x1..x<vars>.
  static Polynomial parse(std::string_view text, std::size_t vars);

  std::size_t vars() const { return vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  Rational coefficient(const Exponents& e) const;
  void add_term(const Exponents& e, const Rational& c);

  Polynomial derivative(std::size_t var) const;
  double evaluate(const Eigen::VectorXd& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const { return *this * Rational(-1); }
  bool operator==(const Polynomial& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

  /// Canonical text form, re-parseable by parse().
  std::string to_string() const;

 private:
  void check_vars(const Polynomial& o) const;

  std::size_t vars_;
  std::map<Exponents, Rational> terms_;
};

/// Vector-valued polynomial map R^m -> R^k compiled to double coefficients
/// over a shared monomial basis, for fast evaluation. Linear combinations of
/// fields compiled on the same basis are plain coefficient-matrix sums.
class NumericField {
 public:
  NumericField() = default;
  NumericField(std::size_t vars, std::vector<Exponents> basis, Eigen::MatrixXd coeffs);
  /// Compiles the components on the given basis (every monomial used by a
  /// component must be in the basis).
  static NumericField compile(const std::vector<Polynomial>& components, const std::vector<Exponents>& basis);
  /// Compiles on the smallest basis covering the components.
  static NumericField compile(const std::vector<Polynomial>& components);

  std::size_t vars() const { return vars_; }
  std::size_t rows() const { return static_cast<std::size_t>(coeffs_.rows()); }
  const std::vector<Exponents>& basis() const { return basis_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  /// Jacobian matrix (rows x vars).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  /// Coefficient-matrix combination; all fields must share the basis.
  static NumericField combine(const std::vector<const NumericField*>& fields, const std::vector<double>& weights);

 private:
  void monomials(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  std::size_t vars_ = 0;
  std::vector<Exponents> basis_;
  Eigen::MatrixXd coeffs_;
  int max_exp_ = 0;
};

/// Union of the monomials of all components, in canonical order.
std::vector<Exponents> monomial_basis(const std::vector<std::vector<Polynomial>>& fields);

}  // namespace roughkit
