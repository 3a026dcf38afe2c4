#include "roughkit/liefields.hpp"

#include "roughkit/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace roughkit {

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("vector field needs at least one component");
  for (const auto& p : components_) {
    if (p.vars() != components_.size()) {
      throw DomainError("vector field on R^" + std::to_string(components_.size()) +
                        " has a component in " + std::to_string(p.vars()) + " variables");
    }
  }
}

PolyVectorField PolyVectorField::zero(std::size_t m) {
  return PolyVectorField(std::vector<Polynomial>(m, Polynomial(m)));
}

PolyVectorField PolyVectorField::constant(const std::vector<Rational>& c) {
  std::vector<Polynomial> comps;
  for (const auto& v : c) comps.push_back(Polynomial::constant(c.size(), v));
  return PolyVectorField(std::move(comps));
}

PolyVectorField PolyVectorField::parse(const std::vector<std::string>& lines) {
  std::vector<Polynomial> comps;
  for (const auto& l : lines) comps.push_back(Polynomial::parse(l, lines.size()));
  return PolyVectorField(std::move(comps));
}

bool PolyVectorField::is_zero() const {
  for (const auto& p : components_)
    if (!p.is_zero()) return false;
  return true;
}

int PolyVectorField::degree() const {
  int d = -1;
  for (const auto& p : components_) d = std::max(d, p.degree());
  return d;
}

Eigen::VectorXd PolyVectorField::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < dim(); ++i) out(static_cast<Eigen::Index>(i)) = components_[i].evaluate(x);
  return out;
}

Eigen::MatrixXd PolyVectorField::jacobian(const Eigen::VectorXd& x) const {
  const auto m = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index l = 0; l < m; ++l)
      out(i, l) = components_[static_cast<std::size_t>(i)].derivative(static_cast<std::size_t>(l)).evaluate(x);
  return out;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
  if (o.dim() != dim()) throw DomainError("adding vector fields of different dimensions");
  for (std::size_t i = 0; i < dim(); ++i) components_[i] += o.components_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Rational& c) {
  for (auto& p : components_) p *= c;
  return *this;
}

std::string PolyVectorField::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += ", ";
    s += components_[i].to_string();
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

PolyVectorField bracket(const PolyVectorField& v, const PolyVectorField& w) {
  if (v.dim() != w.dim()) throw DomainError("bracket of fields on different spaces");
  const std::size_t m = v.dim();
  std::vector<Polynomial> out(m, Polynomial(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < m; ++l) {
      if (!v[l].is_zero()) out[i] += v[l] * w[i].derivative(l);
      if (!w[l].is_zero()) out[i] -= w[l] * v[i].derivative(l);
    }
  }
  return PolyVectorField(std::move(out));
}

PolyVectorField iterated_bracket(const FieldList& fields, const Word& word) {
  if (word.empty()) throw DomainError("iterated bracket of the empty word");
  for (int l : word) {
    if (l < 0 || static_cast<std::size_t>(l) >= fields.size()) {
      throw DomainError("letter " + std::to_string(l + 1) + " outside 1.." + std::to_string(fields.size()));
    }
  }
  PolyVectorField acc = fields[static_cast<std::size_t>(word[0])];
  for (std::size_t k = 1; k < word.size(); ++k) acc = bracket(acc, fields[static_cast<std::size_t>(word[k])]);
  return acc;
}

std::vector<PolyVectorField> brackets_of_length(const FieldList& fields, std::size_t length) {
  if (length == 0) throw DomainError("bracket length must be positive");
  if (fields.empty()) return {};
  std::vector<PolyVectorField> level = fields;
  for (std::size_t k = 1; k < length; ++k) {
    std::vector<PolyVectorField> next;
    next.reserve(level.size() * fields.size());
    for (const auto& b : level)
      for (const auto& f : fields)
        next.push_back(b.is_zero() ? PolyVectorField::zero(b.dim()) : bracket(b, f));
    level = std::move(next);
  }
  return level;
}

NilpotencyResult is_nilpotent(const FieldList& fields, std::size_t n) {
  if (n < 2) throw DomainError("nilpotency order must be at least 2");
  const auto all = brackets_of_length(fields, n);
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (!all[k].is_zero()) return {false, Word::from_index(k, n, fields.size())};
  }
  return {true, std::nullopt};
}

bool constant_brackets(const FieldList& fields, std::size_t up_to) {
  if (up_to < 2) throw DomainError("constant_brackets needs up_to >= 2");
  for (std::size_t len = 2; len <= up_to; ++len)
    for (const auto& b : brackets_of_length(fields, len))
      if (b.degree() > 0) return false;
  return true;
}

std::size_t numeric_rank(Eigen::MatrixXd a, double tol) {
  const double scale = std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  const double cut = tol * scale;
  std::size_t rank = 0;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index pivot = row;
    for (Eigen::Index r = row + 1; r < a.rows(); ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= cut) continue;
    a.row(row).swap(a.row(pivot));
    for (Eigen::Index r = row + 1; r < a.rows(); ++r) a.row(r) -= (a(r, col) / a(row, col)) * a.row(row);
    ++row;
    ++rank;
  }
  return rank;
}

std::size_t hormander_rank(const FieldList& fields, const Eigen::VectorXd& x, std::size_t up_to) {
  if (up_to < 1) throw DomainError("hormander_rank needs up_to >= 1");
  if (fields.empty()) return 0;
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t len = 1; len <= up_to; ++len)
    for (const auto& b : brackets_of_length(fields, len)) rows.push_back(b.evaluate(x));
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), x.size());
  for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return numeric_rank(std::move(a));
}

// ---------------------------------------------------------------------------

namespace {

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

FieldList parse_fields(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string s = strip(raw);
    if (!s.empty()) lines.emplace_back(number, std::move(s));
  }
  if (lines.empty()) throw ParseError("field file is empty", 0);

  std::istringstream header(lines[0].second);
  long long m = 0, d = 0;
  std::string extra;
  if (!(header >> m >> d) || (header >> extra) || m < 1 || d < 1) {
    throw ParseError("expected header 'm d' with positive integers", lines[0].first);
  }
  const auto mm = static_cast<std::size_t>(m);
  const auto dd = static_cast<std::size_t>(d);
  if (lines.size() - 1 != mm * dd) {
    throw ParseError("expected " + std::to_string(mm * dd) + " polynomial lines (" + std::to_string(dd) +
                         " fields of " + std::to_string(mm) + " components), found " +
                         std::to_string(lines.size() - 1),
                     lines.back().first);
  }
  FieldList out;
  for (std::size_t f = 0; f < dd; ++f) {
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < mm; ++i) {
      const auto& [line_no, s] = lines[1 + f * mm + i];
      try {
        comps.push_back(Polynomial::parse(s, mm));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    out.emplace_back(std::move(comps));
  }
  return out;
}

FieldList load_fields(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open field file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fields(buf.str());
}

std::string format_fields(const FieldList& fields) {
  std::string out = std::to_string(state_dim(fields)) + " " + std::to_string(fields.size()) + "\n";
  for (std::size_t f = 0; f < fields.size(); ++f) {
    out += "# V" + std::to_string(f + 1) + "\n";
    for (const auto& p : fields[f].components()) out += p.to_string() + "\n";
  }
  return out;
}

std::uint64_t fields_hash(const FieldList& fields) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_fields(fields)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fields_hash_hex(const FieldList& fields) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fields_hash(fields)));
  return buf;
}

std::size_t state_dim(const FieldList& fields) {
  if (fields.empty()) throw DomainError("empty list of vector fields");
  const std::size_t m = fields.front().dim();
  for (const auto& f : fields)
    if (f.dim() != m) throw DomainError("vector fields live on different spaces");
  return m;
}

}  // namespace roughkit
