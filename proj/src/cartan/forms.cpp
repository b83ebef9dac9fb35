#include "imcheck/cartan/forms.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "imcheck/symexpr/parser.hpp"

namespace imcheck::cartan {

namespace {

void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": chart mismatch");
}

std::string basis_string(const Chart& chart, const Indices& idx) {
  std::string s;
  for (int i : idx) {
    if (!s.empty()) s += "∧";
    s += "d" + chart.name(static_cast<std::size_t>(i));
  }
  return s;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

// ---- Chart ----

Chart::Chart() : names_(std::make_shared<const std::vector<std::string>>()) {}

Chart::Chart(std::vector<std::string> names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw std::invalid_argument("empty coordinate name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate coordinate name '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

Chart Chart::parse_list(std::string_view list) {
  std::vector<std::string> names;
  if (trim(list).empty()) return Chart(names);
  std::size_t start = 0;
  while (true) {
    auto comma = list.find(',', start);
    names.push_back(trim(list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Chart(std::move(names));
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  auto it = std::find(names_->begin(), names_->end(), name);
  if (it == names_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_->begin());
}

Chart Chart::operator+(const Chart& other) const {
  std::vector<std::string> all = *names_;
  all.insert(all.end(), other.names().begin(), other.names().end());
  return Chart(std::move(all));
}

// ---- KForm ----

int sort_with_sign(Indices& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

KForm::KForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative form degree");
}

KForm KForm::scalar(Chart chart, Expr value) {
  KForm f(std::move(chart), 0);
  f.add({}, value);
  return f;
}

KForm KForm::basis(Chart chart, int i) { return basis(std::move(chart), Indices{i}); }

KForm KForm::basis(Chart chart, Indices indices) {
  KForm f(std::move(chart), static_cast<int>(indices.size()));
  f.add(std::move(indices), Expr(1));
  return f;
}

Expr KForm::component(Indices indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw std::invalid_argument("index count does not match degree");
  int sign = sort_with_sign(indices);
  if (sign == 0) return Expr(0);
  auto it = components_.find(indices);
  if (it == components_.end()) return Expr(0);
  return sign > 0 ? it->second : -it->second;
}

Expr KForm::scalar_value() const {
  if (degree_ != 0) throw std::logic_error("not a function: degree " + std::to_string(degree_));
  auto it = components_.find(Indices{});
  return it == components_.end() ? Expr(0) : it->second;
}

KForm& KForm::add(Indices indices, const Expr& coeff) {
  if (static_cast<int>(indices.size()) != degree_) throw std::invalid_argument("index count does not match degree");
  for (int i : indices)
    if (i < 0 || static_cast<std::size_t>(i) >= chart_.dim()) throw std::out_of_range("form index out of range");
  int sign = sort_with_sign(indices);
  if (sign == 0 || coeff.is_zero()) return *this;
  Expr c = sign > 0 ? coeff : -coeff;
  auto [it, inserted] = components_.try_emplace(std::move(indices), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) components_.erase(it);
  }
  return *this;
}

KForm KForm::map_coefficients(const std::function<Expr(const Expr&)>& f) const {
  KForm out(chart_, degree_);
  for (const auto& [idx, c] : components_) out.add(idx, f(c));
  return out;
}

KForm KForm::substitute(const std::map<std::string, Expr, std::less<>>& values) const {
  return map_coefficients([&](const Expr& c) { return c.substitute(values); });
}

KForm KForm::extend_to(const Chart& bigger) const {
  std::vector<int> position(chart_.dim());
  for (std::size_t i = 0; i < chart_.dim(); ++i) {
    auto j = bigger.index_of(chart_.name(i));
    if (!j) throw std::invalid_argument("chart does not contain '" + chart_.name(i) + "'");
    position[i] = static_cast<int>(*j);
  }
  KForm out(bigger, degree_);
  for (const auto& [idx, c] : components_) {
    Indices moved;
    for (int i : idx) moved.push_back(position[static_cast<std::size_t>(i)]);
    out.add(std::move(moved), c);
  }
  return out;
}

std::string KForm::str() const {
  std::vector<std::pair<std::string, Expr>> terms;
  for (const auto& [idx, c] : components_) terms.emplace_back(basis_string(chart_, idx), c);
  return format_combination(terms);
}

KForm operator+(const KForm& a, const KForm& b) {
  if (b.is_zero() && (b.degree_ == 0 || b.degree_ == a.degree_)) return a;
  if (a.is_zero() && a.degree_ == 0) return b;
  require_same_chart(a.chart_, b.chart_, "form sum");
  if (a.degree_ != b.degree_)
    throw std::invalid_argument("cannot add forms of degree " + std::to_string(a.degree_) + " and " +
                                std::to_string(b.degree_));
  KForm out = a;
  for (const auto& [idx, c] : b.components_) out.add(idx, c);
  return out;
}

KForm operator-(const KForm& a, const KForm& b) { return a + (-b); }

KForm KForm::operator-() const {
  KForm out = *this;
  for (auto& [idx, c] : out.components_) c = -c;
  return out;
}

KForm operator*(const Expr& f, const KForm& a) {
  if (f.is_zero()) return KForm(a.chart_, a.degree_);
  return a.map_coefficients([&](const Expr& c) { return f * c; });
}

bool operator==(const KForm& a, const KForm& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree_ == b.degree_ && a.chart_ == b.chart_ && a.components_ == b.components_;
}

// ---- VField ----

VField::VField(Chart chart) : chart_(std::move(chart)), components_(chart_.dim()) {}

VField::VField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (components_.size() != chart_.dim()) throw std::invalid_argument("vector field component count mismatch");
}

VField VField::coordinate(Chart chart, int i) {
  VField v(std::move(chart));
  v.components_.at(static_cast<std::size_t>(i)) = Expr(1);
  return v;
}

Expr VField::apply(const Expr& f) const {
  Expr out;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!components_[i].is_zero() && f.depends_on(chart_.name(i))) out += components_[i] * f.diff(chart_.name(i));
  return out;
}

std::string VField::str() const {
  std::vector<std::pair<std::string, Expr>> terms;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!components_[i].is_zero()) terms.emplace_back("∂" + chart_.name(i), components_[i]);
  return format_combination(terms);
}

VField operator+(const VField& a, const VField& b) {
  require_same_chart(a.chart_, b.chart_, "vector field sum");
  VField out = a;
  for (std::size_t i = 0; i < out.components_.size(); ++i) out.components_[i] += b.components_[i];
  return out;
}

VField operator-(const VField& a, const VField& b) {
  require_same_chart(a.chart_, b.chart_, "vector field difference");
  VField out = a;
  for (std::size_t i = 0; i < out.components_.size(); ++i) out.components_[i] -= b.components_[i];
  return out;
}

VField operator*(const Expr& f, const VField& v) {
  VField out = v;
  for (auto& c : out.components_) c = f * c;
  return out;
}

bool operator==(const VField& a, const VField& b) { return a.chart_ == b.chart_ && a.components_ == b.components_; }

// ---- ChartMap ----

ChartMap::ChartMap(Chart source, Chart target, std::vector<Expr> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (components_.size() != target_.dim()) throw std::invalid_argument("chart map arity does not match target");
  for (const auto& c : components_)
    for (const auto& v : c.free_variables())
      if (!source_.index_of(v)) throw std::invalid_argument("chart map uses '" + v + "' outside its source chart");
  for (std::size_t i = 0; i < target_.dim(); ++i) substitution_.emplace(target_.name(i), components_[i]);
}

ChartMap ChartMap::identity(const Chart& chart) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < chart.dim(); ++i) comps.push_back(chart.coordinate(i));
  return ChartMap(chart, chart, std::move(comps));
}

Expr ChartMap::pull(const Expr& f) const { return f.substitute(substitution_); }

std::vector<double> ChartMap::operator()(std::span<const double> point) const {
  if (point.size() != source_.dim()) throw std::invalid_argument("point dimension mismatch");
  sym::Point p;
  for (std::size_t i = 0; i < point.size(); ++i) p[source_.name(i)] = point[i];
  std::vector<double> out;
  for (const auto& c : components_) out.push_back(c.evaluate(p));
  return out;
}

ChartMap ChartMap::after(const ChartMap& inner) const {
  require_same_chart(inner.target_, source_, "chart map composition");
  std::vector<Expr> comps;
  for (const auto& c : components_) comps.push_back(inner.pull(c));
  return ChartMap(inner.source_, target_, std::move(comps));
}

// ---- operations ----

KForm wedge(const KForm& a, const KForm& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  KForm out(a.chart(), a.degree() + b.degree());
  for (const auto& [i, f] : a.components()) {
    for (const auto& [j, g] : b.components()) {
      Indices idx = i;
      idx.insert(idx.end(), j.begin(), j.end());
      out.add(std::move(idx), f * g);
    }
  }
  return out;
}

KForm d(const KForm& a) {
  const Chart& chart = a.chart();
  KForm out(chart, a.degree() + 1);
  for (const auto& [idx, f] : a.components()) {
    for (std::size_t j = 0; j < chart.dim(); ++j) {
      if (std::find(idx.begin(), idx.end(), static_cast<int>(j)) != idx.end()) continue;
      if (!f.depends_on(chart.name(j))) continue;
      Indices full{static_cast<int>(j)};
      full.insert(full.end(), idx.begin(), idx.end());
      out.add(std::move(full), f.diff(chart.name(j)));
    }
  }
  return out;
}

KForm interior(const VField& x, const KForm& a) {
  require_same_chart(x.chart(), a.chart(), "interior product");
  if (a.degree() == 0) throw std::invalid_argument("interior product of a function");
  KForm out(a.chart(), a.degree() - 1);
  for (const auto& [idx, f] : a.components()) {
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const Expr& xi = x[static_cast<std::size_t>(idx[p])];
      if (xi.is_zero()) continue;
      Indices rest;
      for (std::size_t q = 0; q < idx.size(); ++q)
        if (q != p) rest.push_back(idx[q]);
      Expr c = xi * f;
      out.add(std::move(rest), p % 2 == 0 ? c : -c);
    }
  }
  return out;
}

KForm lie_derivative(const VField& x, const KForm& a) {
  if (a.degree() == 0) return interior(x, d(a));
  return interior(x, d(a)) + d(interior(x, a));
}

KForm pullback(const ChartMap& f, const KForm& a) {
  require_same_chart(f.target(), a.chart(), "pullback");
  const Chart& src = f.source();
  std::vector<std::optional<KForm>> differentials(f.target().dim());
  auto dF = [&](int i) -> const KForm& {
    auto& slot = differentials[static_cast<std::size_t>(i)];
    if (!slot) slot = d(KForm::scalar(src, f.components()[static_cast<std::size_t>(i)]));
    return *slot;
  };
  KForm out(src, a.degree());
  for (const auto& [idx, c] : a.components()) {
    KForm term = KForm::scalar(src, f.pull(c));
    for (int i : idx) term = wedge(term, dF(i));
    out += term;
  }
  return out;
}

VField field_bracket(const VField& x, const VField& y) {
  require_same_chart(x.chart(), y.chart(), "field bracket");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < x.components().size(); ++i) comps.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VField(x.chart(), std::move(comps));
}

// ---- printing and parsing ----

std::string format_combination(const std::vector<std::pair<std::string, Expr>>& terms) {
  struct Piece {
    std::size_t symbol;
    const sym::Term* term;
  };
  std::vector<Piece> pieces;
  for (std::size_t s = 0; s < terms.size(); ++s)
    for (const auto& t : terms[s].second.terms()) pieces.push_back({s, &t});
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    int c = sym::compare_monomials(a.term->factors, b.term->factors);
    if (c != 0) return c < 0;
    return a.symbol < b.symbol;
  });
  if (pieces.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& [s, t] = pieces[k];
    const std::string& symbol = terms[s].first;
    bool negative = t->coeff.is_negative();
    std::string scalar = sym::term_to_string(*t, true, "·");
    std::string piece = symbol.empty() ? scalar : (scalar == "1" ? symbol : scalar + "·" + symbol);
    if (k == 0)
      out = negative ? "−" + piece : piece;
    else
      out += (negative ? " − " : " + ") + piece;
  }
  return out;
}

namespace {

struct FormSemantics {
  using Value = KForm;
  const Chart& chart;

  Value number(const std::string& text, std::size_t at) {
    try {
      return KForm::scalar(chart, Expr(sym::Rational::from_decimal(text)));
    } catch (const std::exception& e) {
      throw sym::ParseError(e.what(), at);
    }
  }
  Value identifier(const std::string& name, std::size_t at) {
    if (auto i = chart.index_of(name)) return KForm::scalar(chart, chart.coordinate(*i));
    if (name.size() > 1 && name[0] == 'd')
      if (auto i = chart.index_of(std::string_view(name).substr(1))) return KForm::basis(chart, static_cast<int>(*i));
    throw sym::ParseError("unknown coordinate '" + name + "'", at);
  }
  Value call(const std::string& name, Value arg, std::size_t at) {
    if (arg.degree() != 0) throw sym::ParseError("function of a form of positive degree", at);
    if (auto v = sym::call_by_name(name, arg.scalar_value())) return KForm::scalar(chart, *v);
    throw sym::ParseError("unknown function '" + name + "'", at);
  }
  Value add(Value a, Value b, std::size_t at) { return checked([&] { return a + b; }, at); }
  Value sub(Value a, Value b, std::size_t at) { return checked([&] { return a - b; }, at); }
  Value mul(Value a, Value b, std::size_t) {
    if (a.degree() == 0) return a.scalar_value() * b;
    if (b.degree() == 0) return b.scalar_value() * a;
    return wedge(a, b);
  }
  Value div(Value a, Value b, std::size_t at) {
    if (b.degree() != 0) throw sym::ParseError("division by a form of positive degree", at);
    return (Expr(1) / b.scalar_value()) * a;
  }
  Value neg(Value a, std::size_t) { return -a; }
  Value pow(Value base, Value exponent, std::size_t at) {
    if (base.degree() > 0 || exponent.degree() > 0) return wedge(base, exponent);
    Expr e = exponent.scalar_value();
    if (!e.is_constant()) throw sym::ParseError("exponent must be a rational constant", at);
    return KForm::scalar(chart, base.scalar_value().pow(e.constant_value()));
  }

  template <class F>
  Value checked(F f, std::size_t at) {
    try {
      return f();
    } catch (const std::invalid_argument& e) {
      throw sym::ParseError(e.what(), at);
    }
  }
};

}  // namespace

KForm parse_form(std::string_view source, const Chart& chart) {
  FormSemantics sem{chart};
  sym::Parser<FormSemantics> parser(source, sem);
  return parser.parse();
}

std::vector<sym::Comparison> component_comparisons(const std::string& label, const KForm& a, const KForm& b) {
  if (!a.is_zero() && !b.is_zero()) {
    require_same_chart(a.chart(), b.chart(), "form comparison");
    if (a.degree() != b.degree()) throw std::invalid_argument("form comparison: degree mismatch");
  }
  const Chart& chart = a.is_zero() ? b.chart() : a.chart();
  std::set<Indices> keys;
  for (const auto& [idx, c] : a.components()) keys.insert(idx);
  for (const auto& [idx, c] : b.components()) keys.insert(idx);
  std::vector<sym::Comparison> out;
  for (const auto& idx : keys) {
    auto ia = a.components().find(idx);
    auto ib = b.components().find(idx);
    std::string basis = idx.empty() ? "scalar" : basis_string(chart, idx);
    out.push_back({label.empty() ? basis : label + " " + basis,
                   ia == a.components().end() ? Expr(0) : ia->second,
                   ib == b.components().end() ? Expr(0) : ib->second});
  }
  return out;
}

sym::CheckOutcome forms_equal(const KForm& a, const KForm& b, const sym::CheckOptions& opts) {
  return sym::compare_all(component_comparisons("", a, b), opts);
}

}  // namespace imcheck::cartan
