#include "imcheck/symexpr/random.hpp"

namespace imcheck::sym {

Expr random_polynomial(const std::vector<std::string>& vars, std::mt19937_64& rng, PolynomialShape shape) {
  std::uniform_int_distribution<int> n_terms(1, shape.max_terms);
  std::uniform_int_distribution<int> coeff(-shape.max_coeff, shape.max_coeff);
  std::uniform_int_distribution<int> degree(0, shape.max_degree);
  Expr out;
  int count = n_terms(rng);
  for (int t = 0; t < count; ++t) {
    Expr term(coeff(rng));
    int deg = degree(rng);
    if (!vars.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
      for (int k = 0; k < deg; ++k) term = term * Expr::variable(vars[pick(rng)]);
    }
    out = out + term;
  }
  return out;
}

}  // namespace imcheck::sym
