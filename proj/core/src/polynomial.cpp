#include "roughkit/polynomial.hpp"

#include "roughkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace roughkit {

Polynomial Polynomial::constant(std::size_t vars, const Rational& c) {
  Polynomial p(vars);
  p.add_term(Exponents(vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t vars, std::size_t index) {
  if (index >= vars) throw DomainError("variable index outside the polynomial ring");
  Exponents e(vars, 0);
  e[index] = 1;
  Polynomial p(vars);
  p.add_term(e, Rational(1));
  return p;
}

int Polynomial::degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != vars_) throw DomainError("monomial has the wrong number of variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_vars(const Polynomial& o) const {
  if (vars_ != o.vars_) throw DomainError("polynomials live in different rings");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_vars(b);
  Polynomial out(a.vars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(ea);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= vars_) throw DomainError("derivative variable outside the polynomial ring");
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d(e);
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != vars_) throw DomainError("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = static_cast<double>(c);
    for (std::size_t k = 0; k < vars_; ++k)
      for (int p = 0; p < e[k]; ++p) term *= x(static_cast<Eigen::Index>(k));
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest degree first reads more naturally.
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.rbegin(), terms_.rend());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int k : a.first) da += k;
    for (int k : b.first) db += k;
    return da > db;
  });
  bool first = true;
  for (const auto& [e, c] : ordered) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(k + 1);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    if (mono.empty()) {
      out += mag.str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.str() + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' integer)?
//   atom   := number | 'x' integer | '(' expr ')'

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t vars) : s_(text), vars_(vars) {}

  Polynomial run() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial '" + std::string(s_) + "': " + msg + " at column " + std::to_string(pos_ + 1), 0);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+')) {
        p += term();
      } else if (eat('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      if (eat('*')) {
        p = p * unary();
      } else if (eat('/')) {
        Polynomial q = unary();
        if (q.degree() != 0) fail("division by a non-constant");
        p *= Rational(1) / q.coefficient(Exponents(vars_, 0));
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    const int n = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (n > 64) fail("exponent too large");
    Polynomial out = Polynomial::constant(vars_, Rational(1));
    for (int k = 0; k < n; ++k) out = out * base;
    return out;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a variable index after 'x'");
      const auto idx = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (idx < 1 || idx > vars_) fail("variable x" + std::to_string(idx) + " outside x1..x" + std::to_string(vars_));
      return Polynomial::variable(vars_, idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // Decimal literals are converted exactly: "0.25" -> 1/4.
  Polynomial number() {
    Rational value(0);
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      value = value * 10 + (s_[pos_++] - '0');
      any = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      Rational scale(1);
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        scale /= 10;
        value += scale * (s_[pos_++] - '0');
        any = true;
      }
    }
    if (!any) fail("malformed number");
    return Polynomial::constant(vars_, value);
  }

  std::string_view s_;
  std::size_t vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::size_t vars) {
  if (vars == 0) throw DomainError("polynomial ring needs at least one variable");
  return Parser(text, vars).run();
}

// ---------------------------------------------------------------------------

NumericField::NumericField(std::size_t vars, std::vector<Exponents> basis, Eigen::MatrixXd coeffs)
    : vars_(vars), basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.cols()) != basis_.size()) {
    throw DomainError("coefficient matrix does not match the monomial basis");
  }
  for (const auto& e : basis_) {
    if (e.size() != vars_) throw DomainError("monomial has the wrong number of variables");
    for (int k : e) max_exp_ = std::max(max_exp_, k);
  }
}

NumericField NumericField::compile(const std::vector<Polynomial>& components, const std::vector<Exponents>& basis) {
  if (components.empty()) throw DomainError("cannot compile an empty field");
  const std::size_t vars = components.front().vars();
  std::map<Exponents, Eigen::Index> where;
  for (std::size_t k = 0; k < basis.size(); ++k) where.emplace(basis[k], static_cast<Eigen::Index>(k));
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(components.size()),
                                                 static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < components.size(); ++r) {
    if (components[r].vars() != vars) throw DomainError("components live in different rings");
    for (const auto& [e, c] : components[r].terms()) {
      auto it = where.find(e);
      if (it == where.end()) throw DomainError("monomial missing from the compilation basis");
      coeffs(static_cast<Eigen::Index>(r), it->second) = static_cast<double>(c);
    }
  }
  return NumericField(vars, basis, std::move(coeffs));
}

NumericField NumericField::compile(const std::vector<Polynomial>& components) {
  return compile(components, monomial_basis({components}));
}

void NumericField::monomials(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  if (static_cast<std::size_t>(x.size()) != vars_) throw DomainError("evaluation point has wrong dimension");
  // powers(k, p) = x_k^p
  Eigen::MatrixXd powers(static_cast<Eigen::Index>(vars_), max_exp_ + 1);
  for (Eigen::Index k = 0; k < powers.rows(); ++k) {
    powers(k, 0) = 1.0;
    for (int p = 1; p <= max_exp_; ++p) powers(k, p) = powers(k, p - 1) * x(k);
  }
  out.resize(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    double v = 1.0;
    for (std::size_t k = 0; k < vars_; ++k) v *= powers(static_cast<Eigen::Index>(k), basis_[b][k]);
    out(static_cast<Eigen::Index>(b)) = v;
  }
}

Eigen::VectorXd NumericField::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd mono;
  monomials(x, mono);
  return coeffs_ * mono;
}

Eigen::MatrixXd NumericField::jacobian(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != vars_) throw DomainError("evaluation point has wrong dimension");
  const auto m = static_cast<Eigen::Index>(vars_);
  Eigen::MatrixXd powers(m, max_exp_ + 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    powers(k, 0) = 1.0;
    for (int p = 1; p <= max_exp_; ++p) powers(k, p) = powers(k, p - 1) * x(k);
  }
  // dmono(b, l) = d/dx_l of basis monomial b.
  Eigen::MatrixXd dmono = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis_.size()), m);
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    const auto& e = basis_[b];
    for (Eigen::Index l = 0; l < m; ++l) {
      if (e[static_cast<std::size_t>(l)] == 0) continue;
      double v = e[static_cast<std::size_t>(l)];
      for (Eigen::Index k = 0; k < m; ++k) {
        const int p = e[static_cast<std::size_t>(k)] - (k == l ? 1 : 0);
        v *= powers(k, p);
      }
      dmono(static_cast<Eigen::Index>(b), l) = v;
    }
  }
  return coeffs_ * dmono;
}

NumericField NumericField::combine(const std::vector<const NumericField*>& fields, const std::vector<double>& weights) {
  if (fields.empty() || fields.size() != weights.size()) throw DomainError("combine needs one weight per field");
  const NumericField& first = *fields.front();
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(first.coeffs_.rows(), first.coeffs_.cols());
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (fields[k]->basis_ != first.basis_ || fields[k]->coeffs_.rows() != coeffs.rows()) {
      throw DomainError("combined fields must share a monomial basis");
    }
    if (weights[k] != 0.0) coeffs += weights[k] * fields[k]->coeffs_;
  }
  return NumericField(first.vars_, first.basis_, std::move(coeffs));
}

std::vector<Exponents> monomial_basis(const std::vector<std::vector<Polynomial>>& fields) {
  std::set<Exponents> all;
  for (const auto& f : fields)
    for (const auto& p : f)
      for (const auto& [e, c] : p.terms()) all.insert(e);
  return {all.begin(), all.end()};
}

}  // namespace roughkit
