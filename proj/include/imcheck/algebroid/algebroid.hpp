#pragma once

// Lie algebroids in a local frame {e_a}: anchor components ρ^j_a(x) and
// structure functions C^c_ab(x), with [e_a, e_b] = C^c_ab e_c.

#include <cstdint>
#include <string>
#include <vector>

#include "imcheck/cartan/forms.hpp"
#include "imcheck/symexpr/check.hpp"
#include "imcheck/tanlift/tangent.hpp"

namespace imcheck::algebroid {

using cartan::Chart;
using cartan::KForm;
using cartan::VField;
using sym::Expr;

using Matrix = std::vector<std::vector<Expr>>;
/// structure[c][a][b] = C^c_ab
using Structure = std::vector<Matrix>;

/// Section u = u^a e_a.
struct Section {
  std::vector<Expr> components;

  static Section basis(std::size_t rank, std::size_t a);
  const Expr& operator[](std::size_t a) const { return components[a]; }
  friend Section operator+(const Section& u, const Section& v);
  friend Section operator-(const Section& u, const Section& v);
  friend Section operator*(const Expr& f, const Section& u);
  friend bool operator==(const Section&, const Section&) = default;
};

class LieAlgebroid {
 public:
  /// anchor[j][a] = ρ^j_a. Every expression may only use base coordinates.
  LieAlgebroid(Chart base, Matrix anchor, Structure structure, std::vector<std::string> section_names = {});

  const Chart& base() const { return base_; }
  std::size_t dim() const { return base_.dim(); }
  std::size_t rank() const { return structure_.size(); }
  const Expr& anchor(std::size_t j, std::size_t a) const { return anchor_[j][a]; }
  const Expr& structure(std::size_t c, std::size_t a, std::size_t b) const { return structure_[c][a][b]; }
  const Matrix& anchor_matrix() const { return anchor_; }
  const Structure& structure_functions() const { return structure_; }
  const std::string& section_name(std::size_t a) const { return names_[a]; }
  const std::vector<std::string>& section_names() const { return names_; }

  /// ρ(e_a)
  VField anchor_field(std::size_t a) const;
  /// ρ(u)
  VField anchor_of(const Section& u) const;
  /// [u,v]^c = u^a v^b C^c_ab + ρ(u)(v^c) − ρ(v)(u^c)
  Section bracket(const Section& u, const Section& v) const;

 private:
  Chart base_;
  Matrix anchor_;
  Structure structure_;
  std::vector<std::string> names_;
};

/// TM with ρ = id and C = 0.
LieAlgebroid tangent_bundle_algebroid(const Chart& base);
/// A Lie algebra as an algebroid over a point.
LieAlgebroid lie_algebra(Structure constants);
/// T*M of a Poisson bivector π^{ab} in the frame dx^a: ρ^j_a = π^{aj},
/// C^c_ab = ∂_c π^{ab}.
LieAlgebroid koszul_algebroid(const Chart& base, const Matrix& poisson);

using AxiomCheck = sym::NamedCheck;

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
  sym::Verdict verdict() const;
};

/// Antisymmetry of C, anchor–bracket compatibility, and Jacobi over every
/// ordered index triple. Failure witnesses name the index tuple (1-based).
AxiomReport check_axioms(const LieAlgebroid& algebroid, const sym::CheckOptions& opts = {});

/// Coordinate charts attached to a bundle A of rank r over a chart (x):
/// A = (x, u), TA = (x, u, ẋ, u̇), A* = (x, ξ), T*A = (x, u, p, ζ),
/// and TM = (x, ẋ).
struct BundleCharts {
  explicit BundleCharts(const Chart& base, std::size_t rank);

  Chart base;
  Chart fibre;      // u
  Chart bundle;     // (x, u)
  Chart dual_fibre; // ξ
  Chart dual;       // (x, ξ)
  tanlift::TangentChart tangent;          // TM
  tanlift::TangentChart tangent_bundle;   // TA
  Chart cotangent_bundle;                 // T*A

  std::size_t dim() const { return base.dim(); }
  std::size_t rank() const { return fibre.dim(); }
};

/// TA -> TM on the frame {Te_1..Te_r, ê_1..ê_r} over the TM chart.
LieAlgebroid tangent_algebroid(const LieAlgebroid& algebroid, const tanlift::TangentChart& tm);
/// T*A -> A* on the frame {e_1^L..e_r^L, d̂x^1..d̂x^n} over the A* chart.
LieAlgebroid cotangent_algebroid(const LieAlgebroid& algebroid, const Chart& dual);

/// Samples random sections with polynomial coefficients and measures, at one
/// random point each, the Jacobiator, the antisymmetry defect, and the defect
/// of ρ([u,v]) = [ρ(u), ρ(v)].
struct RandomTripleResult {
  std::size_t triples = 0;
  double max_jacobi = 0.0;
  double max_antisymmetry = 0.0;
  double max_anchor = 0.0;
  std::size_t domain_errors = 0;
};
RandomTripleResult random_triple_check(const LieAlgebroid& algebroid, std::size_t triples, std::uint64_t seed);

}  // namespace imcheck::algebroid
