#pragma once

// IM 2-forms σ: A -> T*M relative to a closed 3-form φ, the linear 2-form
// Λ = −(σ^*ω_can + ρ^*τ(φ)) on A, and the check that Λ♯: TA -> T*A is a
// Lie algebroid morphism.

#include <optional>
#include <string>
#include <vector>

#include "imcheck/algebroid/algebroid.hpp"

namespace imcheck::imform {

using algebroid::BundleCharts;
using algebroid::LieAlgebroid;
using algebroid::Matrix;
using algebroid::Section;
using cartan::Chart;
using cartan::ChartMap;
using cartan::KForm;
using sym::Expr;
using sym::NamedCheck;

/// σ(e_d) = σ_jd dx^j together with the twisting 3-form.
class IM2FormData {
 public:
  /// sigma[j][d] = σ_jd. Throws std::invalid_argument on shape errors or when
  /// φ is not closed.
  IM2FormData(LieAlgebroid algebroid, Matrix sigma, KForm phi, const sym::CheckOptions& opts = {});
  /// φ = 0
  IM2FormData(LieAlgebroid algebroid, Matrix sigma);

  const LieAlgebroid& algebroid() const { return algebroid_; }
  const Matrix& sigma() const { return sigma_; }
  const KForm& phi() const { return phi_; }
  const BundleCharts& charts() const { return charts_; }
  std::size_t dim() const { return algebroid_.dim(); }
  std::size_t rank() const { return algebroid_.rank(); }

  /// σ(u) as a 1-form on the base.
  KForm sigma_of(const Section& u) const;
  /// σ: A -> T*M, (x, u) ↦ (x, u^d σ_jd)
  ChartMap sigma_map() const;
  /// ρ: A -> TM, (x, u) ↦ (x, ρ^j_d u^d)
  ChartMap anchor_map() const;

 private:
  LieAlgebroid algebroid_;
  Matrix sigma_;
  KForm phi_;
  BundleCharts charts_;
};

/// ⟨σ(u), ρ(v)⟩ + ⟨σ(v), ρ(u)⟩
Expr im1_pairing(const IM2FormData& data, const Section& u, const Section& v);
/// σ([u,v]) − (L_{ρ(u)}σ(v) − i_{ρ(v)}dσ(u) + i_{ρ(v)}i_{ρ(u)}φ)
KForm im2_defect(const IM2FormData& data, const Section& u, const Section& v);

struct IMReport {
  NamedCheck im1;
  NamedCheck im2;
  sym::Verdict verdict() const { return sym::combine(im1.outcome.verdict, im2.outcome.verdict); }
  bool passed() const { return verdict() == sym::Verdict::Pass; }
};

/// Both IM conditions on every ordered pair of frame sections.
IMReport check_im(const IM2FormData& data, const sym::CheckOptions& opts = {});

/// Linear 2-form on A = (x, u) split as ½Λ_ij,d u^d dx^i∧dx^j + λ_jd dx^j∧du^d.
struct LinearForm {
  KForm form;
  bool linear = false;
  /// Why the shape test failed, if it did.
  std::string shape_note;
  /// λ_jd: coefficient of dx^j∧du^d, i.e. the covering map TM -> A*.
  Matrix lambda;
  /// horizontal[i][j][d] = Λ_ij,d (antisymmetric in i, j).
  std::vector<Matrix> horizontal;
};

/// Classifies a 2-form on charts.bundle by shape and extracts its pieces.
LinearForm decompose_linear(const KForm& form, const BundleCharts& charts);

/// Λ = −(σ^*ω_can + ρ^*τ(φ))
LinearForm build_lambda(const IM2FormData& data);

/// Λ♯ from the closed-form coordinate expression: (x, u, ẋ, u̇) ↦ (x, u, p, ζ)
/// with p_j = ẋ^l u^d (∂_l σ_jd − ∂_j σ_ld) + u̇^d σ_jd − φ_ijk u^d ρ^k_d ẋ^i
/// and ζ_d = −ẋ^l σ_ld.
ChartMap lambda_sharp(const IM2FormData& data);

/// U ↦ i_U Λ for a 2-form on charts.bundle, as a map TA -> T*A.
ChartMap contraction_sharp(const KForm& form, const BundleCharts& charts);

/// Comparisons between two maps TA -> T*A, one per target coordinate.
std::vector<sym::Comparison> map_comparisons(const std::string& label, const ChartMap& a, const ChartMap& b);

struct MorphismReport {
  /// covering, anchor-core, anchor-linear, core-core, core-linear,
  /// linear-linear; in this order.
  std::vector<NamedCheck> cases;
  IMReport im;

  /// Conjunction of the morphism cases (IM results are reported alongside).
  sym::Verdict verdict() const;
  bool passed() const { return verdict() == sym::Verdict::Pass; }
  const NamedCheck& find(std::string_view name) const;
};

/// Checks that Λ♯ covers −σ^t, intertwines the anchors on core and linear
/// frame sections, and preserves brackets for the three pairings of frame
/// section types.
MorphismReport check_morphism(const IM2FormData& data, const sym::CheckOptions& opts = {});

/// Λ♯(Te_a) = e_a^L + f^a_j d̂x^j and Λ♯(ê_a) = σ_ja d̂x^j, as coefficient
/// vectors on the T*A frame {e^L, d̂x} with entries that are functions on TM.
std::vector<Expr> frame_image(const IM2FormData& data, std::size_t generator);

struct LinearAnalysis {
  LinearForm form;
  /// dL = 0
  sym::CheckOutcome closed;
  /// L = (λ^t)^*ω_can
  sym::CheckOutcome reconstructs;
  /// Both verdicts agree, as they must for a linear form.
  bool biconditional_holds() const { return linear() && closed.passed() == reconstructs.passed(); }
  bool linear() const { return form.linear; }
};

/// Shape test, covering map extraction, and closedness vs reconstruction
/// from the covering map. Non-linear input is classified, not rejected.
LinearAnalysis analyze_linear(const KForm& form, const BundleCharts& charts, const sym::CheckOptions& opts = {});

/// (λ^t)^*ω_can for λ_jd given as an n×r matrix.
KForm canonical_pullback(const Matrix& lambda, const BundleCharts& charts);

}  // namespace imcheck::imform
