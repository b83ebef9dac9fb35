#pragma once

#include <random>
#include <string>
#include <vector>

#include "imcheck/symexpr/expr.hpp"

namespace imcheck::sym {

struct PolynomialShape {
  int max_terms = 4;
  int max_degree = 3;
  int max_coeff = 5;  // integer coefficients in [-max_coeff, max_coeff]
};

/// Random polynomial in `vars` with small integer coefficients. May be zero.
Expr random_polynomial(const std::vector<std::string>& vars, std::mt19937_64& rng, PolynomialShape shape = {});

}  // namespace imcheck::sym
