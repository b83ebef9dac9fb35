#pragma once

// Randomized identity checking: an identity produces, for one random trial,
// a list of lhs/rhs comparisons that must agree symbolically.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "imcheck/cartan/forms.hpp"
#include "imcheck/symexpr/random.hpp"

namespace imcheck::cartan {

Chart numbered_chart(std::string_view stem, std::size_t n);
/// All strictly increasing k-tuples from {0..n-1}.
std::vector<Indices> increasing_tuples(std::size_t n, int k);

/// Never zero when a form of this degree exists.
KForm random_form(const Chart& chart, int degree, std::mt19937_64& rng, sym::PolynomialShape shape = {3, 2, 4});
VField random_field(const Chart& chart, std::mt19937_64& rng, sym::PolynomialShape shape = {3, 2, 4});
ChartMap random_map(const Chart& source, const Chart& target, std::mt19937_64& rng,
                    sym::PolynomialShape shape = {3, 2, 3});

/// Lie derivative from the coordinate formula
/// (L_X a)_I = X^j ∂_j a_I + Σ_p (∂_{i_p} X^j) a_{I with i_p -> j};
/// an independent oracle for the Cartan-formula implementation.
KForm lie_derivative_coordinate(const VField& x, const KForm& a);

struct Identity {
  std::string name;
  std::function<std::vector<sym::Comparison>(std::mt19937_64&)> trial;
};

struct IdentityResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t comparisons = 0;
  std::size_t failures = 0;
  /// Comparisons that could not be settled symbolically.
  std::size_t numeric = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && numeric == 0; }
};

/// Runs `trials` independent trials (in parallel); trial t uses a generator
/// seeded from (seed, name, t), so results do not depend on scheduling.
IdentityResult run_identity(const Identity& identity, std::size_t trials, std::uint64_t seed);

/// d∘d = 0, Cartan formula, interior nilpotency, Lie derivative Leibniz and
/// commutator rules, naturality of pullback with d and wedge.
std::vector<Identity> exterior_identities();

}  // namespace imcheck::cartan
