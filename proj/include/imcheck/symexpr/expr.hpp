#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imcheck/symexpr/rational.hpp"

namespace imcheck::sym {

/// Raised when an expression is evaluated (or built) outside its domain:
/// division by zero, log of a non-positive number, even root of a negative.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Function { Sin, Cos, Exp, Log };

std::string_view function_name(Function f);

/// Assignment of real values to variable names.
using Point = std::map<std::string, double, std::less<>>;

class Expr;
struct AtomData;
using Atom = std::shared_ptr<const AtomData>;

/// One factor atom^exponent of a monomial; exponents are nonzero integers.
struct Factor {
  Atom atom;
  int exponent = 1;
};

/// coeff * product(factors). Factors are sorted by atom order, atoms unique.
struct Term {
  Rational coeff;
  std::vector<Factor> factors;
};

/// Scalar expression over named variables, always held in canonical form.
///
/// The canonical form is a sum of terms with exact rational coefficients.
/// Each term is a product of integer powers of atoms; an atom is a variable,
/// an elementary function applied to a canonical argument, or a root/inverse
/// of a canonical multi-term base. Polynomials (and Laurent polynomials) in
/// the variables therefore have a unique representation: two such
/// expressions are equal as functions iff their canonical forms coincide.
/// Expressions are immutable and cheap to copy.
class Expr {
 public:
  Expr();
  Expr(Rational value);     // NOLINT(google-explicit-constructor)
  Expr(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<std::int64_t>(value)) {}  // NOLINT

  static Expr variable(std::string name);
  static Expr call(Function f, const Expr& argument);

  const std::vector<Term>& terms() const;
  bool is_zero() const;
  bool is_constant() const;
  /// Constant value, or throws std::logic_error if the expression is not constant.
  Rational constant_value() const;
  /// True when every atom is a variable (Laurent polynomial).
  bool is_polynomial() const;
  std::vector<std::string> free_variables() const;
  bool depends_on(std::string_view var) const;

  /// exponent must be rational; negative powers of zero raise DomainError.
  Expr pow(const Rational& exponent) const;

  Expr diff(std::string_view var) const;
  /// Simultaneous substitution of variables by expressions.
  Expr substitute(const std::map<std::string, Expr, std::less<>>& values) const;
  /// Throws DomainError if the value is not finite, std::invalid_argument if a
  /// free variable is unbound.
  double evaluate(const Point& point) const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::vector<Term> canonical_terms);
  friend Expr from_terms(std::vector<Term> terms);

  std::shared_ptr<const std::vector<Term>> terms_;
};

/// Builds a canonical expression from arbitrary (unsorted, uncombined) terms.
Expr from_terms(std::vector<Term> terms);

struct AtomData {
  enum class Kind { Variable, Function, Root };
  Kind kind = Kind::Variable;
  std::string name;        // Variable
  Function function{};     // Function
  Expr argument;           // Function argument or Root base
  int root_index = 1;      // Root: argument^(1/root_index)
  std::string key;         // printed form; orders atoms within a kind
  std::vector<std::string> free_vars;
};

/// Strict weak order on atoms used for canonical factor ordering.
bool atom_less(const AtomData& a, const AtomData& b);
bool atom_equal(const AtomData& a, const AtomData& b);

/// Canonical monomial order (graded, then lexicographic over atoms);
/// negative when `a` comes first.
int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b);

/// Natural ("x2" < "x10") ordering on names.
bool natural_less(std::string_view a, std::string_view b);

Expr parse(std::string_view source);
/// sin, cos, exp, log, sqrt applied to `arg`; nullopt for any other name.
std::optional<Expr> call_by_name(std::string_view name, const Expr& arg);
Expr diff(const Expr& e, std::string_view var);
/// Returns the canonical form. Expressions are normalized on construction,
/// so this re-derives the canonical form from the term list (idempotent).
Expr simplify(const Expr& e);

std::string to_string(const Expr& e);
/// Prints one term; `absolute` drops the sign, `times` joins the factors.
std::string term_to_string(const Term& t, bool absolute, std::string_view times = "*");
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace imcheck::sym
