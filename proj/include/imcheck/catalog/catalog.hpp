#pragma once

// Built-in examples: algebroids, IM 2-forms with a mutation corpus, twisted
// Dirac frames, and the pair groupoid M×M ⇉ M.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imcheck/imform/imform.hpp"

namespace imcheck::catalog {

using algebroid::LieAlgebroid;
using algebroid::Matrix;
using cartan::Chart;
using cartan::ChartMap;
using cartan::KForm;
using cartan::VField;
using imform::IM2FormData;
using sym::Expr;

// ---- algebroids ----

struct AlgebroidExample {
  std::string name;
  std::string description;
  LieAlgebroid algebroid;
  /// false for deliberately broken structure functions
  bool valid = true;
};

Matrix so3_poisson();
/// C^3_12 = 1 and cyclic
algebroid::Structure so3_structure();
/// Builtin algebroids in a fixed order; the invalid ones come last.
std::vector<AlgebroidExample> builtin_algebroids();

// ---- IM 2-forms ----

/// σ_jd = β_dj, the matrix of u ↦ i_u β on TM.
Matrix contraction_matrix(const KForm& beta);

struct IMExample {
  std::string name;
  std::string description;
  IM2FormData data;
  /// Which IM conditions fail; empty for positive examples.
  std::vector<std::string> broken_conditions;
  /// Morphism cases predicted to fail, in report order.
  std::vector<std::string> failing_cases;

  bool positive() const { return broken_conditions.empty(); }
};

/// Positives first, then the mutation corpus.
std::vector<IMExample> builtin_examples();
/// Throws std::out_of_range for unknown names.
IMExample find_example(std::string_view name);

// ---- twisted Dirac frames ----

struct DiracSection {
  std::vector<Expr> vector;  // X^j
  KForm form;                // α, a 1-form
};

struct DiracFrame {
  Chart base;
  std::vector<DiracSection> sections;
  KForm phi;

  /// Frame (∂_i, i_{∂_i} ω) of the graph of a 2-form.
  static DiracFrame graph(const KForm& omega, KForm phi);
  /// Sections replaced by Σ_j m[i][j] (X_j, α_j) for a constant matrix m.
  DiracFrame transformed(const std::vector<std::vector<int>>& m) const;
};

/// ([X,Y], L_X β − i_Y dα + i_Y i_X φ)
DiracSection courant_bracket(const DiracSection& a, const DiracSection& b, const KForm& phi);

struct DiracReport {
  bool accepted = false;
  /// "isotropy", "rank", "involutivity" or empty
  std::string rejection;
  /// Offending pair (1-based) and point for a rejection.
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::vector<double> point;
  sym::CheckOutcome isotropy;
  std::size_t min_rank = 0;
  double max_involutivity = 0.0;
  /// IM1/IM2 of the induced σ evaluated at the sample points with the
  /// least-squares structure functions.
  double max_im1 = 0.0;
  double max_im2 = 0.0;
  double max_anchor = 0.0;
  bool im_passed = false;
};

/// Involutivity by least squares at opts.samples points of the sampling box;
/// a residual above `tolerance` rejects the frame.
DiracReport check_dirac(const DiracFrame& frame, const sym::CheckOptions& opts = {}, double tolerance = 1e-8);

/// For a frame with X_i = ∂_i: the algebroid TM with σ_jd = α_d(∂_j).
IM2FormData dirac_to_im(const DiracFrame& frame);

struct DiracExample {
  std::string name;
  std::string description;
  DiracFrame frame;
  bool accepted;
};
std::vector<DiracExample> builtin_dirac();

// ---- pair groupoid ----

class PairGroupoid {
 public:
  explicit PairGroupoid(Chart base);

  const Chart& base() const { return base_; }
  /// (x, y) with x = target, y = source
  const Chart& arrows() const { return arrows_; }
  /// (x, y, z) for the composable pair ((x,y), (y,z))
  const Chart& composable() const { return composable_; }
  const ChartMap& source() const { return source_; }
  const ChartMap& target() const { return target_; }
  const ChartMap& multiplication() const { return multiplication_; }
  const ChartMap& first() const { return first_; }
  const ChartMap& second() const { return second_; }
  /// ι_A: (x, u) ↦ (x, x, u, 0) into T(M×M)
  ChartMap algebroid_inclusion() const;
  const algebroid::BundleCharts& charts() const { return charts_; }

  /// t^*β − s^*β
  KForm telescoped(const KForm& beta) const;

 private:
  Chart base_, arrows_, composable_;
  ChartMap source_, target_, multiplication_, first_, second_;
  algebroid::BundleCharts charts_;
};

struct PairGroupoidReport {
  /// m^*ω = p1^*ω + p2^*ω
  sym::NamedCheck multiplicative;
  /// s∘m = s∘p2 and t∘m = t∘p1
  sym::NamedCheck structure_maps;
  /// ι_A^* ω_T on the A chart (x, u)
  KForm lie_form;
  /// σ_ω(u)(X) = ω(u, X) at units
  Matrix sigma;
  KForm phi;
  /// dω = s^*φ − t^*φ
  sym::NamedCheck relatively_closed;
  /// LF(ω) = −(σ^*ω_can + ρ^*τ(φ)); Inconclusive when φ could not be recovered.
  sym::NamedCheck relation;

  bool passed() const;
};

PairGroupoidReport pair_groupoid_check(const PairGroupoid& groupoid, const KForm& omega,
                                       const sym::CheckOptions& opts = {});

}  // namespace imcheck::catalog
