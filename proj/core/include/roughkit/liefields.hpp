#pragma once

#include "roughkit/polynomial.hpp"
#include "roughkit/signature.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roughkit {

/// Polynomial vector field sum_i P_i(x) d/dx_i on R^m.
class PolyVectorField {
 public:
  explicit PolyVectorField(std::vector<Polynomial> components);
  static PolyVectorField zero(std::size_t m);
  /// Constant field c.
  static PolyVectorField constant(const std::vector<Rational>& c);
  static PolyVectorField parse(const std::vector<std::string>& lines);

  std::size_t dim() const { return components_.size(); }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<Polynomial>& components() const { return components_; }

  bool is_zero() const;
  /// Largest component degree; -1 for the zero field.
  int degree() const;

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  NumericField compile() const { return NumericField::compile(components_); }
  NumericField compile(const std::vector<Exponents>& basis) const {
    return NumericField::compile(components_, basis);
  }

  PolyVectorField& operator+=(const PolyVectorField& o);
  PolyVectorField& operator*=(const Rational& c);
  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator*(PolyVectorField a, const Rational& c) { return a *= c; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) {
    return a += b * Rational(-1);
  }
  bool operator==(const PolyVectorField& o) const { return components_ == o.components_; }

  std::string to_string() const;  // "(P_1, ..., P_m)"

 private:
  std::vector<Polynomial> components_;
};

using FieldList = std::vector<PolyVectorField>;

/// [V, W]^i = V^l d_l W^i - W^l d_l V^i. Throws DomainError if m differs.
PolyVectorField bracket(const PolyVectorField& v, const PolyVectorField& w);

/// Left-nested bracket [[V_{w_1}, V_{w_2}], ...], V_{w_k}] for a zero-based
/// word. Throws DomainError for an empty word or a letter out of range.
PolyVectorField iterated_bracket(const FieldList& fields, const Word& word);

/// All left-nested brackets of words of the given length, in word-index order.
std::vector<PolyVectorField> brackets_of_length(const FieldList& fields, std::size_t length);

struct NilpotencyResult {
  bool nilpotent;
  std::optional<Word> witness;  // a word whose bracket does not vanish
  explicit operator bool() const { return nilpotent; }
};

/// True iff every left-nested bracket of length n vanishes identically.
NilpotencyResult is_nilpotent(const FieldList& fields, std::size_t n);

/// True iff every left-nested bracket of length 2..up_to is a constant field.
bool constant_brackets(const FieldList& fields, std::size_t up_to);

/// Rank of the matrix whose rows are all brackets of length 1..up_to at x,
/// by Gaussian elimination with relative pivot tolerance 1e-10.
std::size_t hormander_rank(const FieldList& fields, const Eigen::VectorXd& x, std::size_t up_to);

/// Rank of the rows of a dense matrix with the same elimination rule.
std::size_t numeric_rank(Eigen::MatrixXd rows, double tol = 1e-10);

/// Field file: optional '#' comments, a header "m d", then d blocks of m
/// polynomial lines. Throws ParseError with the offending line.
FieldList parse_fields(std::string_view text);
FieldList load_fields(const std::filesystem::path& path);
std::string format_fields(const FieldList& fields);

/// FNV-1a 64-bit hash of the canonical text form.
std::uint64_t fields_hash(const FieldList& fields);
std::string fields_hash_hex(const FieldList& fields);

/// Dimension m shared by all fields; throws DomainError if inconsistent.
std::size_t state_dim(const FieldList& fields);

}  // namespace roughkit
