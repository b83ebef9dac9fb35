#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imcheck/symexpr/check.hpp"
#include "imcheck/symexpr/expr.hpp"

namespace imcheck::cartan {

using sym::Expr;

/// Ordered, distinct coordinate names. Copies share the name list.
class Chart {
 public:
  Chart();
  explicit Chart(std::vector<std::string> names);
  /// "x1,x2,x3" (whitespace around names ignored).
  static Chart parse_list(std::string_view list);

  std::size_t dim() const { return names_->size(); }
  const std::vector<std::string>& names() const { return *names_; }
  const std::string& name(std::size_t i) const { return names_->at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  Expr coordinate(std::size_t i) const { return Expr::variable(name(i)); }
  /// Concatenation; names must stay distinct.
  Chart operator+(const Chart& other) const;

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Strictly increasing 0-based coordinate positions dx^{i1}∧...∧dx^{ik}.
using Indices = std::vector<int>;

/// Sorts `indices` in place and returns the permutation sign, or 0 when an
/// index repeats.
int sort_with_sign(Indices& indices);

/// Differential k-form on a chart, stored on increasing multi-indices with
/// nonzero coefficients only. A degree-0 form is a function.
class KForm {
 public:
  KForm() = default;
  KForm(Chart chart, int degree);

  static KForm scalar(Chart chart, Expr value);
  /// dx^i
  static KForm basis(Chart chart, int i);
  /// dx^{i1}∧...∧dx^{ik} for arbitrary-order indices (sign applied).
  static KForm basis(Chart chart, Indices indices);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<Indices, Expr>& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  /// Coefficient for indices in any order, with the permutation sign.
  Expr component(Indices indices) const;
  /// Value of a degree-0 form.
  Expr scalar_value() const;

  /// Adds coeff·dx^{indices}; indices in any order, repeats vanish.
  KForm& add(Indices indices, const Expr& coeff);

  KForm map_coefficients(const std::function<Expr(const Expr&)>& f) const;
  KForm substitute(const std::map<std::string, Expr, std::less<>>& values) const;
  /// Same components moved onto a chart that contains every name of this one.
  KForm extend_to(const Chart& bigger) const;

  std::string str() const;

  friend KForm operator+(const KForm& a, const KForm& b);
  friend KForm operator-(const KForm& a, const KForm& b);
  KForm operator-() const;
  friend KForm operator*(const Expr& f, const KForm& a);
  KForm& operator+=(const KForm& o) { return *this = *this + o; }
  KForm& operator-=(const KForm& o) { return *this = *this - o; }

  friend bool operator==(const KForm& a, const KForm& b);

 private:
  Chart chart_;
  int degree_ = 0;
  std::map<Indices, Expr> components_;
};

/// Vector field v^i ∂/∂x^i.
class VField {
 public:
  VField() = default;
  explicit VField(Chart chart);
  VField(Chart chart, std::vector<Expr> components);
  /// ∂/∂x^i
  static VField coordinate(Chart chart, int i);

  const Chart& chart() const { return chart_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](std::size_t i) const { return components_[i]; }

  /// Directional derivative X(f).
  Expr apply(const Expr& f) const;
  std::string str() const;

  friend VField operator+(const VField& a, const VField& b);
  friend VField operator-(const VField& a, const VField& b);
  friend VField operator*(const Expr& f, const VField& v);
  friend bool operator==(const VField& a, const VField& b);

 private:
  Chart chart_;
  std::vector<Expr> components_;
};

/// Coordinate map: one expression in the source coordinates per target
/// coordinate.
class ChartMap {
 public:
  ChartMap(Chart source, Chart target, std::vector<Expr> components);
  static ChartMap identity(const Chart& chart);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const std::vector<Expr>& components() const { return components_; }

  /// Expression on the target rewritten in source coordinates.
  Expr pull(const Expr& f) const;
  /// Numeric image of a source point.
  std::vector<double> operator()(std::span<const double> point) const;

  /// (*this) ∘ inner
  ChartMap after(const ChartMap& inner) const;

 private:
  Chart source_;
  Chart target_;
  std::vector<Expr> components_;
  std::map<std::string, Expr, std::less<>> substitution_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm d(const KForm& a);
/// Interior product; throws std::invalid_argument on degree-0 input.
KForm interior(const VField& x, const KForm& a);
/// L_X a = i_X d a + d i_X a.
KForm lie_derivative(const VField& x, const KForm& a);
KForm pullback(const ChartMap& f, const KForm& a);
VField field_bracket(const VField& x, const VField& y);

/// Parses a form such as "x2*dx1^dx3 - dx2∧dx3" on `chart`. Chart names are
/// coordinates and "d<name>" the matching basis 1-forms; '^' is the wedge
/// product when either side has positive degree.
KForm parse_form(std::string_view source, const Chart& chart);

/// Prints Σ coeff·symbol expanded into monomials, ordered by monomial and
/// then by position in `terms`; "0" when empty. Empty symbols denote scalars.
std::string format_combination(const std::vector<std::pair<std::string, Expr>>& terms);

/// One comparison per multi-index present in either form.
std::vector<sym::Comparison> component_comparisons(const std::string& label, const KForm& a, const KForm& b);
sym::CheckOutcome forms_equal(const KForm& a, const KForm& b, const sym::CheckOptions& opts = {});

}  // namespace imcheck::cartan
