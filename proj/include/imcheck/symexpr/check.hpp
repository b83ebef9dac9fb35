#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imcheck/symexpr/expr.hpp"

namespace imcheck::sym {

enum class Mode { Symbolic, Numeric };
enum class Verdict { Pass, Fail, Inconclusive };

std::string_view verdict_name(Verdict v);
/// Pass < Inconclusive < Fail; combining keeps the worst.
Verdict combine(Verdict a, Verdict b);

struct CheckOptions {
  Mode mode = Mode::Symbolic;
  std::size_t samples = 100;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  double box_lo = -2.0;
  double box_hi = 2.0;
  bool parallel = true;
};

/// One identity lhs == rhs to be checked; the label names it in witnesses.
struct Comparison {
  std::string label;
  Expr lhs;
  Expr rhs;
};

struct Witness {
  std::string label;
  Point point;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct CheckOutcome {
  Verdict verdict = Verdict::Pass;
  /// Largest scaled residual seen among numerically sampled comparisons.
  double max_residual = 0.0;
  /// Number of comparisons that were not settled symbolically.
  std::size_t numeric_comparisons = 0;
  std::optional<Witness> witness;
  std::string note;

  bool passed() const { return verdict == Verdict::Pass; }
};

/// A named group of comparisons and its combined outcome.
struct NamedCheck {
  std::string name;
  CheckOutcome outcome;
};

/// Checks every comparison. In symbolic mode a comparison whose difference
/// canonicalizes to zero passes outright, a nonzero polynomial difference is a
/// definite failure, and anything else is sampled numerically. The witness
/// (if any) belongs to the first failing comparison in declaration order.
CheckOutcome compare_all(const std::vector<Comparison>& comparisons, const CheckOptions& opts = {});

CheckOutcome expr_equal(const Expr& a, const Expr& b, const CheckOptions& opts = {});

}  // namespace imcheck::sym
