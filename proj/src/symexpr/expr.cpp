#include "imcheck/symexpr/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

namespace imcheck::sym {

namespace {

int atom_compare(const AtomData& a, const AtomData& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.key == b.key) return 0;
  if (a.kind == AtomData::Kind::Variable) return natural_less(a.key, b.key) ? -1 : 1;
  return a.key < b.key ? -1 : 1;
}

int total_degree(const std::vector<Factor>& fs) {
  int d = 0;
  for (const auto& f : fs) d += f.exponent;
  return d;
}

// Graded order, then lexicographic on exponent vectors over the atom order.
// Negative result means `a` is printed first.
int monomial_compare(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  int da = total_degree(a);
  int db = total_degree(b);
  if (da != db) return da > db ? -1 : 1;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) return a[i].exponent > 0 ? -1 : 1;
    if (i == a.size()) return b[j].exponent > 0 ? 1 : -1;
    int c = atom_compare(*a[i].atom, *b[j].atom);
    if (c == 0) {
      if (a[i].exponent != b[j].exponent) return a[i].exponent > b[j].exponent ? -1 : 1;
      ++i;
      ++j;
    } else if (c < 0) {
      return a[i].exponent > 0 ? -1 : 1;
    } else {
      return b[j].exponent > 0 ? 1 : -1;
    }
  }
  return 0;
}

bool needs_normalization(const Factor& f) {
  if (f.atom->kind != AtomData::Kind::Root) return false;
  int n = f.atom->root_index;
  if (n == 1) return f.exponent > 0;
  return f.exponent < 0 || f.exponent >= n;
}

std::vector<Factor> merge_factors(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  std::vector<Factor> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = atom_compare(*a[i].atom, *b[j].atom);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].exponent + b[j].exponent;
      if (e != 0) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

Atom make_atom(AtomData data) { return std::make_shared<const AtomData>(std::move(data)); }

Atom make_variable_atom(std::string name) {
  AtomData d;
  d.kind = AtomData::Kind::Variable;
  d.key = name;
  d.free_vars = {name};
  d.name = std::move(name);
  return make_atom(std::move(d));
}

bool is_bare_variable(const Expr& e) {
  const auto& ts = e.terms();
  return ts.size() == 1 && ts[0].coeff.is_one() && ts[0].factors.size() == 1 &&
         ts[0].factors[0].exponent == 1 && ts[0].factors[0].atom->kind == AtomData::Kind::Variable;
}

std::string root_base_string(const Expr& base) {
  if (is_bare_variable(base)) return base.str();
  return "(" + base.str() + ")";
}

Atom make_root_atom(const Expr& base, int n) {
  AtomData d;
  d.kind = AtomData::Kind::Root;
  d.argument = base;
  d.root_index = n;
  d.key = root_base_string(base);
  if (n != 1) d.key += "^(1/" + std::to_string(n) + ")";
  d.free_vars = base.free_variables();
  return make_atom(std::move(d));
}

Expr single(Rational coeff, std::vector<Factor> factors) {
  std::vector<Term> ts;
  ts.push_back({coeff, std::move(factors)});
  return from_terms(std::move(ts));
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Expr atom_power(const Atom& atom, int e);

// Expands a term whose root factors violate the canonical exponent ranges.
Expr normalize_term(const Term& t) {
  bool dirty = std::any_of(t.factors.begin(), t.factors.end(), needs_normalization);
  if (!dirty) return single(t.coeff, t.factors);
  std::vector<Factor> clean;
  Expr rest(1);
  for (const auto& f : t.factors) {
    if (needs_normalization(f))
      rest = rest * atom_power(f.atom, f.exponent);
    else
      clean.push_back(f);
  }
  return single(t.coeff, std::move(clean)) * rest;
}

Expr atom_power(const Atom& atom, int e) {
  if (e == 0) return Expr(1);
  if (atom->kind != AtomData::Kind::Root) return single(1, {{atom, e}});
  int n = atom->root_index;
  const Expr& base = atom->argument;
  if (n == 1) {
    if (e > 0) return base.pow(e);
    return single(1, {{atom, e}});
  }
  int q = floor_div(e, n);
  int r = e - q * n;
  Expr out = r == 0 ? Expr(1) : single(1, {{atom, r}});
  if (q != 0) out = out * base.pow(q);
  return out;
}

void append_product(const Term& a, const Term& b, std::vector<Term>& out) {
  Term t{a.coeff * b.coeff, merge_factors(a.factors, b.factors)};
  if (std::any_of(t.factors.begin(), t.factors.end(), needs_normalization)) {
    Expr n = normalize_term(t);
    out.insert(out.end(), n.terms().begin(), n.terms().end());
  } else {
    out.push_back(std::move(t));
  }
}

Expr scale(const Expr& e, const Rational& c) {
  if (c.is_zero()) return Expr(0);
  if (c.is_one()) return e;
  std::vector<Term> ts = e.terms();
  for (auto& t : ts) t.coeff *= c;
  return from_terms(std::move(ts));
}

// Inverse of a multi-term base: pull out the leading coefficient so that the
// opaque base is unique up to that scalar.
Expr multi_term_power(const Expr& base, int k) {
  Rational lead = base.terms().front().coeff;
  Expr monic = scale(base, Rational(1) / lead);
  return single(lead.pow(k), {{make_root_atom(monic, 1), k}});
}

std::string format_exponent(const Rational& q) {
  if (q.is_integer() && !q.is_negative()) return "^" + q.str();
  return "^(" + q.str() + ")";
}

std::string factor_string(const Factor& f) {
  const AtomData& a = *f.atom;
  std::string base;
  Rational q(f.exponent);
  switch (a.kind) {
    case AtomData::Kind::Variable:
      base = a.name;
      break;
    case AtomData::Kind::Function:
      base = std::string(function_name(a.function)) + "(" + a.argument.str() + ")";
      break;
    case AtomData::Kind::Root:
      base = root_base_string(a.argument);
      q = Rational(f.exponent, a.root_index);
      break;
  }
  if (q.is_one()) return base;
  return base + format_exponent(q);
}

bool terms_equal(const Term& a, const Term& b) {
  if (a.coeff != b.coeff || a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (a.factors[i].exponent != b.factors[i].exponent) return false;
    if (!atom_equal(*a.factors[i].atom, *b.factors[i].atom)) return false;
  }
  return true;
}

double int_power(double x, int e) {
  if (e < 0) return 1.0 / int_power(x, -e);
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e > 0) x *= x;
  }
  return r;
}

double eval_atom(const AtomData& a, const Point& point) {
  switch (a.kind) {
    case AtomData::Kind::Variable: {
      auto it = point.find(a.name);
      if (it == point.end()) throw std::invalid_argument("no value for variable '" + a.name + "'");
      return it->second;
    }
    case AtomData::Kind::Function: {
      double x = a.argument.evaluate(point);
      switch (a.function) {
        case Function::Sin:
          return std::sin(x);
        case Function::Cos:
          return std::cos(x);
        case Function::Exp:
          return std::exp(x);
        case Function::Log:
          if (x <= 0) throw DomainError("log of a non-positive value");
          return std::log(x);
      }
      break;
    }
    case AtomData::Kind::Root: {
      double x = a.argument.evaluate(point);
      int n = a.root_index;
      if (n == 1) return x;
      if (x < 0) {
        if (n % 2 == 0) throw DomainError("even root of a negative value");
        return -std::pow(-x, 1.0 / n);
      }
      return std::pow(x, 1.0 / n);
    }
  }
  throw std::logic_error("unknown atom kind");
}

}  // namespace

std::string term_to_string(const Term& t, bool absolute, std::string_view times) {
  Rational c = absolute ? t.coeff.abs() : t.coeff;
  std::string fs;
  for (const auto& f : t.factors) {
    if (!fs.empty()) fs += times;
    fs += factor_string(f);
  }
  if (fs.empty()) return c.str();
  if (c.is_one()) return fs;
  if (c == Rational(-1)) return "-" + fs;
  return c.str() + std::string(times) + fs;
}

std::string_view function_name(Function f) {
  switch (f) {
    case Function::Sin:
      return "sin";
    case Function::Cos:
      return "cos";
    case Function::Exp:
      return "exp";
    case Function::Log:
      return "log";
  }
  return "?";
}

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && digit(a[i])) ++i;
      while (j < b.size() && digit(b[j])) ++j;
      std::string_view na = a.substr(i0, i - i0);
      std::string_view nb = b.substr(j0, j - j0);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
    } else {
      if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  return monomial_compare(a, b);
}

bool atom_less(const AtomData& a, const AtomData& b) { return atom_compare(a, b) < 0; }

bool atom_equal(const AtomData& a, const AtomData& b) { return a.kind == b.kind && a.key == b.key; }

Expr::Expr() : terms_(std::make_shared<const std::vector<Term>>()) {}

Expr::Expr(Rational value) {
  std::vector<Term> ts;
  if (!value.is_zero()) ts.push_back({value, {}});
  terms_ = std::make_shared<const std::vector<Term>>(std::move(ts));
}

Expr::Expr(std::int64_t value) : Expr(Rational(value)) {}

Expr::Expr(std::vector<Term> canonical_terms)
    : terms_(std::make_shared<const std::vector<Term>>(std::move(canonical_terms))) {}

Expr from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return monomial_compare(a.factors, b.factors) < 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && monomial_compare(out.back().factors, t.factors) == 0)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return t.coeff.is_zero(); });
  return Expr(std::move(out));
}

Expr Expr::variable(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return single(1, {{make_variable_atom(std::move(name)), 1}});
}

Expr Expr::call(Function f, const Expr& argument) {
  if (argument.is_zero()) {
    if (f == Function::Sin) return Expr(0);
    if (f == Function::Cos || f == Function::Exp) return Expr(1);
    throw DomainError("log of zero");
  }
  if (f == Function::Log && argument.is_constant()) {
    Rational c = argument.constant_value();
    if (c.is_one()) return Expr(0);
    if (c.is_negative()) throw DomainError("log of a negative constant");
  }
  AtomData d;
  d.kind = AtomData::Kind::Function;
  d.function = f;
  d.argument = argument;
  d.key = std::string(function_name(f)) + "(" + argument.str() + ")";
  d.free_vars = argument.free_variables();
  return single(1, {{make_atom(std::move(d)), 1}});
}

const std::vector<Term>& Expr::terms() const { return *terms_; }

bool Expr::is_zero() const { return terms_->empty(); }

bool Expr::is_constant() const {
  return terms_->empty() || (terms_->size() == 1 && terms_->front().factors.empty());
}

Rational Expr::constant_value() const {
  if (!is_constant()) throw std::logic_error("expression is not constant: " + str());
  return terms_->empty() ? Rational(0) : terms_->front().coeff;
}

bool Expr::is_polynomial() const {
  for (const auto& t : *terms_)
    for (const auto& f : t.factors)
      if (f.atom->kind != AtomData::Kind::Variable) return false;
  return true;
}

std::vector<std::string> Expr::free_variables() const {
  std::vector<std::string> out;
  for (const auto& t : *terms_)
    for (const auto& f : t.factors) out.insert(out.end(), f.atom->free_vars.begin(), f.atom->free_vars.end());
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) { return natural_less(a, b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Expr::depends_on(std::string_view var) const {
  for (const auto& t : *terms_)
    for (const auto& f : t.factors)
      if (std::find(f.atom->free_vars.begin(), f.atom->free_vars.end(), var) != f.atom->free_vars.end())
        return true;
  return false;
}

Expr Expr::pow(const Rational& exponent) const {
  if (exponent.is_zero()) return Expr(1);
  if (exponent.is_one()) return *this;
  if (is_zero()) {
    if (exponent.is_negative()) throw DomainError("division by zero");
    return Expr(0);
  }
  const std::int64_t m = exponent.num();
  const std::int64_t n = exponent.den();
  if (n > 1 << 20 || m > 1 << 20 || m < -(1 << 20)) throw std::overflow_error("exponent too large");

  if (is_constant()) {
    Rational c = constant_value();
    if (n == 1) return Expr(c.pow(m));
    if (c.is_negative() && n % 2 == 0) throw DomainError("even root of a negative constant");
    if (auto r = c.root(n)) return Expr(r->pow(m));
    return atom_power(make_root_atom(*this, static_cast<int>(n)), static_cast<int>(m));
  }

  if (n == 1 && m > 0) {
    Expr result(1);
    Expr base = *this;
    std::int64_t e = m;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return result;
  }

  const auto& ts = *terms_;
  if (n == 1) {
    if (ts.size() > 1) return multi_term_power(*this, static_cast<int>(m));
    const Term& t = ts.front();
    Term inv{t.coeff.pow(m), {}};
    for (const auto& f : t.factors) inv.factors.push_back({f.atom, f.exponent * static_cast<int>(m)});
    return normalize_term(inv);
  }
  return atom_power(make_root_atom(*this, static_cast<int>(n)), static_cast<int>(m));
}

Expr Expr::diff(std::string_view var) const {
  std::vector<Term> out;
  for (const auto& t : *terms_) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      const AtomData& a = *f.atom;
      if (std::find(a.free_vars.begin(), a.free_vars.end(), var) == a.free_vars.end()) continue;
      // d(atom^e) = e * atom^(e-1) * d(atom)
      Expr datom;
      Expr rest_power;
      std::vector<Factor> rest;
      rest.reserve(t.factors.size());
      for (std::size_t j = 0; j < t.factors.size(); ++j)
        if (j != i) rest.push_back(t.factors[j]);
      Expr others = single(t.coeff * Rational(f.exponent), std::move(rest));
      switch (a.kind) {
        case AtomData::Kind::Variable:
          others = others * atom_power(f.atom, f.exponent - 1);
          break;
        case AtomData::Kind::Function: {
          Expr du = a.argument.diff(var);
          Expr outer;
          switch (a.function) {
            case Function::Sin:
              outer = Expr::call(Function::Cos, a.argument);
              break;
            case Function::Cos:
              outer = -Expr::call(Function::Sin, a.argument);
              break;
            case Function::Exp:
              outer = Expr::call(Function::Exp, a.argument);
              break;
            case Function::Log:
              outer = a.argument.pow(-1);
              break;
          }
          others = others * atom_power(f.atom, f.exponent - 1) * outer * du;
          break;
        }
        case AtomData::Kind::Root: {
          // (B^(1/n))^e differentiates to (e/n) B^(e/n - 1) B'; the factor e
          // is already in `others`.
          int n = a.root_index;
          Expr db = a.argument.diff(var);
          Expr p = a.argument.pow(Rational(f.exponent - n, n));
          others = others * Expr(Rational(1, n)) * p * db;
          break;
        }
      }
      out.insert(out.end(), others.terms().begin(), others.terms().end());
    }
  }
  return from_terms(std::move(out));
}

Expr Expr::substitute(const std::map<std::string, Expr, std::less<>>& values) const {
  if (values.empty()) return *this;
  auto touched = [&](const AtomData& a) {
    for (const auto& v : a.free_vars)
      if (values.contains(v)) return true;
    return false;
  };
  std::vector<Term> out;
  for (const auto& t : *terms_) {
    bool any = std::any_of(t.factors.begin(), t.factors.end(), [&](const Factor& f) { return touched(*f.atom); });
    if (!any) {
      out.push_back(t);
      continue;
    }
    Expr product(t.coeff);
    std::vector<Factor> kept;
    for (const auto& f : t.factors) {
      const AtomData& a = *f.atom;
      if (!touched(a)) {
        kept.push_back(f);
        continue;
      }
      switch (a.kind) {
        case AtomData::Kind::Variable:
          product = product * values.find(a.name)->second.pow(f.exponent);
          break;
        case AtomData::Kind::Function:
          product = product * Expr::call(a.function, a.argument.substitute(values)).pow(f.exponent);
          break;
        case AtomData::Kind::Root:
          product = product * a.argument.substitute(values).pow(Rational(f.exponent, a.root_index));
          break;
      }
    }
    product = product * single(1, std::move(kept));
    out.insert(out.end(), product.terms().begin(), product.terms().end());
  }
  return from_terms(std::move(out));
}

double Expr::evaluate(const Point& point) const {
  double sum = 0.0;
  for (const auto& t : *terms_) {
    double p = t.coeff.to_double();
    for (const auto& f : t.factors) {
      double v = eval_atom(*f.atom, point);
      if (f.exponent < 0 && v == 0.0) throw DomainError("division by zero");
      p *= int_power(v, f.exponent);
    }
    sum += p;
  }
  if (!std::isfinite(sum)) throw DomainError("non-finite value");
  return sum;
}

std::string Expr::str() const {
  if (terms_->empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : *terms_) {
    if (first) {
      s = term_to_string(t, false);
      first = false;
    } else {
      s += t.coeff.is_negative() ? " - " : " + ";
      s += term_to_string(t, true);
    }
  }
  return s;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::vector<Term> ts;
  ts.reserve(a.terms().size() + b.terms().size());
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = monomial_compare(x[i].factors, y[j].factors);
    if (c < 0) {
      ts.push_back(x[i++]);
    } else if (c > 0) {
      ts.push_back(y[j++]);
    } else {
      Rational s = x[i].coeff + y[j].coeff;
      if (!s.is_zero()) ts.push_back({s, x[i].factors});
      ++i;
      ++j;
    }
  }
  ts.insert(ts.end(), x.begin() + static_cast<std::ptrdiff_t>(i), x.end());
  ts.insert(ts.end(), y.begin() + static_cast<std::ptrdiff_t>(j), y.end());
  return Expr(std::move(ts));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr Expr::operator-() const {
  std::vector<Term> ts = *terms_;
  for (auto& t : ts) t.coeff = -t.coeff;
  return Expr(std::move(ts));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_constant()) return scale(b, a.constant_value());
  if (b.is_constant()) return scale(a, b.constant_value());
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) append_product(s, t, out);
  return from_terms(std::move(out));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  return a * b.pow(-1);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.terms_ == b.terms_) return true;
  const auto& x = a.terms();
  const auto& y = b.terms();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!terms_equal(x[i], y[i])) return false;
  return true;
}

Expr diff(const Expr& e, std::string_view var) { return e.diff(var); }

Expr simplify(const Expr& e) { return from_terms(e.terms()); }

std::string to_string(const Expr& e) { return e.str(); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

}  // namespace imcheck::sym
