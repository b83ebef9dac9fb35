#pragma once

// Tangent and cotangent bundle charts, lifts of forms from M to TM, and the
// canonical coordinate flips between iterated tangent/cotangent bundles.

#include <string>
#include <string_view>

#include "imcheck/cartan/forms.hpp"

namespace imcheck::tanlift {

using cartan::Chart;
using cartan::ChartMap;
using cartan::KForm;
using cartan::VField;
using sym::Expr;

/// Velocity name for a coordinate: x1 -> ẋ1, p_x1 -> ṗ_x1. Letters without a
/// precomposed dotted form get a combining dot above (U+0307).
std::string dotted(std::string_view name);

enum class FibreNaming {
  Dot,    // x -> ẋ
  Delta,  // x -> δx, used for the second tangent direction on T(TM)
};

/// Chart (x, ẋ) on TM induced by a chart (x) on M.
class TangentChart {
 public:
  explicit TangentChart(Chart base, FibreNaming naming = FibreNaming::Dot);

  const Chart& base() const { return base_; }
  const Chart& fibre() const { return fibre_; }
  const Chart& total() const { return total_; }
  std::size_t base_dim() const { return base_.dim(); }

  Expr position(std::size_t i) const { return base_.coordinate(i); }
  Expr velocity(std::size_t i) const { return fibre_.coordinate(i); }

  /// p_M: TM -> M
  ChartMap projection() const;
  /// V = ẋ^j ∂/∂x^j on TM.
  VField euler_field() const;

 private:
  Chart base_;
  Chart fibre_;
  Chart total_;
};

/// Chart (x, p) on T*M with momenta "p_<name>".
class CotangentChart {
 public:
  explicit CotangentChart(Chart base);

  const Chart& base() const { return base_; }
  const Chart& momenta() const { return momenta_; }
  const Chart& total() const { return total_; }

  /// θ_can = p_i dx^i
  KForm theta_can() const;
  /// ω_can = dx^i ∧ dp_i = −dθ_can
  KForm omega_can() const;

 private:
  Chart base_;
  Chart momenta_;
  Chart total_;
};

/// β ↦ p_M^*β
KForm vertical_lift(const TangentChart& tm, const KForm& a);
/// τ(α) = i_V p_M^*α; throws std::invalid_argument for functions.
KForm tau(const TangentChart& tm, const KForm& a);
/// α_T = L_V p_M^*α
KForm tangent_lift(const TangentChart& tm, const KForm& a);

/// TF: TM -> TN, (x, ẋ) ↦ (F(x), DF(x)ẋ). The charts must match F's ends.
ChartMap tangent_map(const ChartMap& f, const TangentChart& source, const TangentChart& target);

/// ω♯: TM -> T*M, p_j = ẋ^i ω_ij, for a 2-form ω.
ChartMap sharp(const KForm& omega, const TangentChart& tm, const CotangentChart& cot);

/// J_M on T(TM) = (x, ẋ, δx, δẋ): swaps the two middle blocks. `ttm` must be
/// the Delta-named tangent chart of `tm.total()`.
ChartMap canonical_involution(const TangentChart& tm, const TangentChart& ttm);

/// Θ_M: T(T*M) -> T*(TM), (x, p, ẋ, ṗ) ↦ (x, ẋ, p_x = ṗ, p_ẋ = p).
/// `tcot` must be the tangent chart of `cot.total()`, `cotm` the cotangent
/// chart of `tm.total()`.
ChartMap tangent_cotangent_flip(const CotangentChart& cot, const TangentChart& tcot, const TangentChart& tm,
                                const CotangentChart& cotm);

/// I: T(A*) -> T•A, (x, ξ, ẋ, ξ̇) ↦ (x, ζ = ξ̇, ẋ, η = ξ). `dual_tangent` is
/// the tangent chart of the A* chart (x, ξ) with n base coordinates; `target`
/// lists (x, ζ, ẋ, η).
ChartMap dual_flip(const TangentChart& dual_tangent, std::size_t base_dim, const Chart& target);

/// α_T for a 2-form via Θ_M ∘ Tα♯ ∘ J_M, read back as a 2-form on TM.
/// Throws std::logic_error if the induced bilinear form is not antisymmetric.
KForm tangent_lift_by_sharp(const TangentChart& tm, const KForm& omega);

}  // namespace imcheck::tanlift
