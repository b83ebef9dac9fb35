#pragma once

#include <span>
#include <string>
#include <vector>

#include "imcheck/symexpr/expr.hpp"

namespace imcheck::sym {

/// An expression flattened against a fixed variable ordering for fast
/// repeated evaluation. Out-of-domain evaluation returns NaN instead of
/// throwing, so it can run inside parallel loops.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws std::invalid_argument if a free variable is missing from `vars`.
  CompiledExpr(const Expr& e, const std::vector<std::string>& vars);

  double operator()(std::span<const double> values) const;

 private:
  struct Node {
    enum class Kind { Variable, Function, Root } kind;
    int var = -1;
    Function function{};
    int root_index = 1;
    int child = -1;  // index into subprograms_
  };
  struct Factor {
    int node;
    int exponent;
  };
  struct Term {
    double coeff;
    std::vector<Factor> factors;
  };

  int add_node(const AtomData& atom, const std::vector<std::string>& vars);

  std::vector<Term> terms_;
  std::vector<Node> nodes_;
  std::vector<CompiledExpr> subprograms_;
};

}  // namespace imcheck::sym
