#include "imcheck/catalog/catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imcheck/kernels/sampling.hpp"
#include "imcheck/symexpr/compiled.hpp"
#include "imcheck/symexpr/parser.hpp"
#include "imcheck/tanlift/tangent.hpp"

namespace imcheck::catalog {

using algebroid::Structure;
using sym::parse;

namespace {

const Chart& r2() {
  static const Chart c = Chart::parse_list("x1,x2");
  return c;
}
const Chart& r3() {
  static const Chart c = Chart::parse_list("x1,x2,x3");
  return c;
}

Structure zero_structure(std::size_t r) { return Structure(r, Matrix(r, std::vector<Expr>(r))); }

Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, std::vector<Expr>(cols)); }

Matrix identity(std::size_t n) {
  Matrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

Matrix plus(Matrix a, const Matrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
  return a;
}

KForm form(std::string_view text, const Chart& chart) { return cartan::parse_form(text, chart); }

std::string pair_label(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

// ---- algebroids ----

Matrix so3_poisson() {
  return {{0, parse("x3"), parse("-x2")}, {parse("-x3"), 0, parse("x1")}, {parse("x2"), parse("-x1"), 0}};
}

Structure so3_structure() {
  Structure c = zero_structure(3);
  for (std::size_t a = 0; a < 3; ++a) {
    std::size_t b = (a + 1) % 3, k = (a + 2) % 3;
    c[k][a][b] = Expr(1);
    c[k][b][a] = Expr(-1);
  }
  return c;
}

std::vector<AlgebroidExample> builtin_algebroids() {
  Structure aff = zero_structure(2);
  aff[1][0][1] = Expr(1);
  aff[1][1][0] = Expr(-1);
  Structure flipped = so3_structure();
  flipped[2][0][1] = Expr(-1);
  Matrix plane_pi{{0, parse("x1")}, {parse("-x1"), 0}};
  return {
      {"tm_r2", "tangent bundle of the plane", algebroid::tangent_bundle_algebroid(r2()), true},
      {"tm_r3", "tangent bundle of R^3", algebroid::tangent_bundle_algebroid(r3()), true},
      {"so3", "so(3) over a point", algebroid::lie_algebra(so3_structure()), true},
      {"aff", "the 2-dimensional non-abelian Lie algebra, [e1,e2] = e2", algebroid::lie_algebra(aff), true},
      {"so3_koszul", "cotangent algebroid of the linear Poisson structure on so(3)*",
       algebroid::koszul_algebroid(r3(), so3_poisson()), true},
      {"plane_koszul", "cotangent algebroid of x1 d/dx1^d/dx2 on the plane",
       algebroid::koszul_algebroid(r2(), plane_pi), true},
      {"so3_flipped", "so(3) with only C^3_12 negated", algebroid::lie_algebra(flipped), false},
  };
}

// ---- IM 2-forms ----

Matrix contraction_matrix(const KForm& beta) {
  if (beta.degree() != 2) throw std::invalid_argument("contraction_matrix needs a 2-form");
  const std::size_t n = beta.chart().dim();
  Matrix m = zero_matrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d < n; ++d)
      if (j != d) m[j][d] = beta.component({static_cast<int>(d), static_cast<int>(j)});
  return m;
}

std::vector<IMExample> builtin_examples() {
  const auto tm3 = algebroid::tangent_bundle_algebroid(r3());
  const auto tm2 = algebroid::tangent_bundle_algebroid(r2());
  const auto koszul = algebroid::koszul_algebroid(r3(), so3_poisson());
  const KForm beta = form("x2*dx1^dx3", r3());
  const KForm plane_beta = form("x1*dx1^dx2", r2());
  const Matrix sigma_beta = contraction_matrix(beta);

  const std::vector<std::string> im1_cases{"anchor-core"};
  const std::vector<std::string> im2_cases{"anchor-linear", "core-linear"};
  const std::vector<std::string> both_cases{"anchor-core", "anchor-linear", "core-linear"};

  Matrix shifted = sigma_beta;
  shifted[0][0] += Expr(1);
  Matrix plane_shifted = contraction_matrix(plane_beta);
  plane_shifted[1][1] += Expr(1);
  Matrix scaled = identity(3);
  scaled[0][0] = Expr(2);
  Matrix flipped = identity(3);
  flipped[2][2] = Expr(-1);

  std::vector<IMExample> out;
  out.push_back({"tm_beta", "TM over R^3, sigma = i_u beta for beta = x2 dx1^dx3, phi = -d beta",
                 IM2FormData(tm3, sigma_beta, -d(beta)), {}, {}});
  out.push_back({"so3_koszul", "Koszul algebroid of so(3)*, sigma = identity, phi = 0", IM2FormData(koszul, identity(3)),
                 {}, {}});
  out.push_back({"so3_point", "so(3) over a point, sigma = 0",
                 IM2FormData(algebroid::lie_algebra(so3_structure()), Matrix{}), {}, {}});
  out.push_back({"plane_beta", "TM over R^2, sigma = i_u beta for beta = x1 dx1^dx2, phi = 0",
                 IM2FormData(tm2, contraction_matrix(plane_beta)), {}, {}});

  out.push_back({"tm_beta_im1_shift", "tm_beta with 1 added to sigma_11", IM2FormData(tm3, shifted, -d(beta)), {"IM1"},
                 im1_cases});
  out.push_back({"plane_beta_im1_shift", "plane_beta with 1 added to sigma_22", IM2FormData(tm2, plane_shifted), {"IM1"},
                 im1_cases});
  out.push_back({"tm_beta_drop_phi", "tm_beta without its twisting 3-form", IM2FormData(tm3, sigma_beta), {"IM2"},
                 im2_cases});
  out.push_back({"tm_beta_phi_sign", "tm_beta with phi = +d beta", IM2FormData(tm3, sigma_beta, d(beta)), {"IM2"},
                 im2_cases});
  out.push_back({"tm_beta_extra_term", "tm_beta plus i_u(x3 dx1^dx2) in sigma, phi unchanged",
                 IM2FormData(tm3, plus(sigma_beta, contraction_matrix(form("x3*dx1^dx2", r3()))), -d(beta)), {"IM2"},
                 im2_cases});
  out.push_back({"so3_koszul_row_scaled", "so3_koszul with the first row of sigma doubled",
                 IM2FormData(koszul, scaled), {"IM1", "IM2"}, both_cases});
  out.push_back({"so3_koszul_sign_flip", "so3_koszul with sigma_33 = -1", IM2FormData(koszul, flipped),
                 {"IM1", "IM2"}, both_cases});
  return out;
}

IMExample find_example(std::string_view name) {
  for (auto& e : builtin_examples())
    if (e.name == name) return e;
  throw std::out_of_range("no built-in example named " + std::string(name));
}

// ---- Dirac ----

DiracFrame DiracFrame::graph(const KForm& omega, KForm phi) {
  const Chart& base = omega.chart();
  const std::size_t n = base.dim();
  DiracFrame frame{base, {}, std::move(phi)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> x(n);
    x[i] = Expr(1);
    VField v(base, x);
    frame.sections.push_back({std::move(x), interior(v, omega)});
  }
  return frame;
}

DiracFrame DiracFrame::transformed(const std::vector<std::vector<int>>& m) const {
  const std::size_t n = base.dim();
  DiracFrame out{base, {}, phi};
  for (const auto& row : m) {
    DiracSection s{std::vector<Expr>(n), KForm(base, 1)};
    for (std::size_t j = 0; j < sections.size(); ++j) {
      Expr c(row.at(j));
      for (std::size_t k = 0; k < n; ++k) s.vector[k] += c * sections[j].vector[k];
      s.form += c * sections[j].form;
    }
    out.sections.push_back(std::move(s));
  }
  return out;
}

DiracSection courant_bracket(const DiracSection& a, const DiracSection& b, const KForm& phi) {
  const Chart& base = a.form.chart();
  VField x(base, a.vector), y(base, b.vector);
  KForm t = lie_derivative(x, b.form) - interior(y, d(a.form)) + interior(y, interior(x, phi));
  return {field_bracket(x, y).components(), std::move(t)};
}

namespace {

// Rows 0..n-1 carry X, rows n..2n-1 carry α.
std::vector<sym::CompiledExpr> compile_section(const DiracSection& s, const Chart& base) {
  std::vector<sym::CompiledExpr> out;
  for (const auto& e : s.vector) out.emplace_back(e, base.names());
  for (std::size_t j = 0; j < base.dim(); ++j) out.emplace_back(s.form.component({static_cast<int>(j)}), base.names());
  return out;
}

Eigen::VectorXd evaluate(const std::vector<sym::CompiledExpr>& rows, std::span<const double> point) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v(static_cast<Eigen::Index>(i)) = rows[i](point);
  return v;
}

struct PointResult {
  std::size_t rank = 0;
  double involutivity = 0.0, im1 = 0.0, im2 = 0.0, anchor = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst;
};

}  // namespace

DiracReport check_dirac(const DiracFrame& frame, const sym::CheckOptions& opts, double tolerance) {
  const Chart& base = frame.base;
  const std::size_t n = base.dim(), r = frame.sections.size();
  DiracReport report;
  if (r != n) throw std::invalid_argument("a Dirac frame needs one section per base coordinate");
  if (!(frame.phi.chart() == base) || frame.phi.degree() != 3)
    throw std::invalid_argument("phi must be a 3-form on the base chart");

  std::vector<sym::Comparison> iso;
  std::vector<std::pair<std::size_t, std::size_t>> iso_pairs;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      Expr pairing;
      for (std::size_t k = 0; k < n; ++k) {
        int kk = static_cast<int>(k);
        pairing += frame.sections[i].form.component({kk}) * frame.sections[j].vector[k] +
                   frame.sections[j].form.component({kk}) * frame.sections[i].vector[k];
      }
      iso.push_back({"isotropy " + pair_label(i, j), pairing, Expr(0)});
      iso_pairs.emplace_back(i + 1, j + 1);
    }
  report.isotropy = sym::compare_all(iso, opts);
  if (!report.isotropy.passed()) {
    report.rejection = "isotropy";
    if (const auto& w = report.isotropy.witness) {
      for (std::size_t k = 0; k < iso.size(); ++k)
        if (iso[k].label == w->label) report.pair = iso_pairs[k];
      for (const auto& v : base.names()) report.point.push_back(w->point.count(v) ? w->point.at(v) : 0.0);
    }
    return report;
  }

  std::vector<std::vector<sym::CompiledExpr>> columns;
  for (const auto& s : frame.sections) columns.push_back(compile_section(s, base));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<sym::CompiledExpr>> brackets;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (i != j) {
        pairs.emplace_back(i, j);
        brackets.push_back(compile_section(courant_bracket(frame.sections[i], frame.sections[j], frame.phi), base));
      }

  const auto samples = kernels::sample_box(n, opts.samples, opts.seed, {opts.box_lo, opts.box_hi});
  std::vector<PointResult> results(opts.samples);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(opts.samples); ++s) {
    std::span<const double> point(samples.data() + static_cast<std::size_t>(s) * n, n);
    Eigen::MatrixXd f(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(r));
    for (std::size_t a = 0; a < r; ++a) f.col(static_cast<Eigen::Index>(a)) = evaluate(columns[a], point);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f);
    PointResult& res = results[static_cast<std::size_t>(s)];
    res.rank = static_cast<std::size_t>(qr.rank());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      Eigen::VectorXd b = evaluate(brackets[p], point);
      Eigen::VectorXd c = qr.solve(b);
      Eigen::VectorXd defect = f * c - b;
      const auto top = static_cast<Eigen::Index>(n);
      double scale = 1.0 + b.norm();
      double inv = defect.norm() / scale;
      if (inv > res.involutivity) {
        res.involutivity = inv;
        res.worst = pairs[p];
      }
      res.anchor = std::max(res.anchor, defect.head(top).norm() / scale);
      res.im2 = std::max(res.im2, defect.tail(top).norm() / scale);
    }
    Eigen::MatrixXd x = f.topRows(static_cast<Eigen::Index>(n)), alpha = f.bottomRows(static_cast<Eigen::Index>(n));
    res.im1 = (alpha.transpose() * x + x.transpose() * alpha).cwiseAbs().maxCoeff();
  }

  report.min_rank = r;
  for (std::size_t s = 0; s < results.size(); ++s) {
    const auto& res = results[s];
    report.min_rank = std::min(report.min_rank, res.rank);
    report.max_involutivity = std::max(report.max_involutivity, res.involutivity);
    report.max_im1 = std::max(report.max_im1, res.im1);
    report.max_im2 = std::max(report.max_im2, res.im2);
    report.max_anchor = std::max(report.max_anchor, res.anchor);
    if (report.rejection.empty() && res.rank < r) {
      report.rejection = "rank";
      report.point.assign(samples.begin() + static_cast<std::ptrdiff_t>(s * n),
                          samples.begin() + static_cast<std::ptrdiff_t>((s + 1) * n));
    }
    if (report.rejection.empty() && res.involutivity > tolerance) {
      report.rejection = "involutivity";
      report.pair = std::pair{res.worst->first + 1, res.worst->second + 1};
      report.point.assign(samples.begin() + static_cast<std::ptrdiff_t>(s * n),
                          samples.begin() + static_cast<std::ptrdiff_t>((s + 1) * n));
    }
  }
  report.accepted = report.rejection.empty();
  report.im_passed =
      report.accepted && report.max_im1 < tolerance && report.max_im2 < tolerance && report.max_anchor < tolerance;
  return report;
}

IM2FormData dirac_to_im(const DiracFrame& frame) {
  const std::size_t n = frame.base.dim();
  if (frame.sections.size() != n) throw std::invalid_argument("a Dirac frame needs one section per base coordinate");
  Matrix sigma = zero_matrix(n, n);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t k = 0; k < n; ++k)
      if (!(frame.sections[d].vector[k] == Expr(k == d ? 1 : 0)))
        throw std::invalid_argument("dirac_to_im needs the frame X_i = d/dx_i");
    for (std::size_t j = 0; j < n; ++j) sigma[j][d] = frame.sections[d].form.component({static_cast<int>(j)});
  }
  return IM2FormData(algebroid::tangent_bundle_algebroid(frame.base), std::move(sigma), frame.phi);
}

std::vector<DiracExample> builtin_dirac() {
  const KForm beta = form("x2*dx1^dx3", r3());
  DiracFrame non_isotropic = DiracFrame::graph(form("x1*dx1^dx2", r2()), KForm(r2(), 3));
  non_isotropic.sections[0].form += KForm::basis(r2(), 0);
  return {
      {"closed_graph", "graph of the closed 2-form dx1^dx2 + x3 dx1^dx3 + x2 dx2^dx3",
       DiracFrame::graph(form("dx1^dx2 + x3*dx1^dx3 + x2*dx2^dx3", r3()), KForm(r3(), 3)), true},
      {"twisted_graph", "graph of beta = x2 dx1^dx3 twisted by phi = -d beta", DiracFrame::graph(beta, -d(beta)), true},
      {"untwisted_graph", "graph of beta = x2 dx1^dx3 without twisting", DiracFrame::graph(beta, KForm(r3(), 3)), false},
      {"non_isotropic", "graph frame on the plane with dx1 added to the first form", non_isotropic, false},
  };
}

// ---- pair groupoid ----

namespace {

Chart copy(const Chart& base, const std::string& suffix) {
  std::vector<std::string> names;
  for (const auto& x : base.names()) names.push_back(x + suffix);
  return Chart(std::move(names));
}

std::vector<Expr> coords(const Chart& c, std::size_t from, std::size_t count) {
  std::vector<Expr> out;
  for (std::size_t i = from; i < from + count; ++i) out.push_back(c.coordinate(i));
  return out;
}

std::vector<Expr> concat(std::vector<Expr> a, const std::vector<Expr>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

PairGroupoid::PairGroupoid(Chart base)
    : base_(base),
      arrows_(copy(base, "_1") + copy(base, "_2")),
      composable_(copy(base, "_1") + copy(base, "_2") + copy(base, "_3")),
      source_(arrows_, base, coords(arrows_, base.dim(), base.dim())),
      target_(arrows_, base, coords(arrows_, 0, base.dim())),
      multiplication_(composable_, arrows_,
                      concat(coords(composable_, 0, base.dim()), coords(composable_, 2 * base.dim(), base.dim()))),
      first_(composable_, arrows_, coords(composable_, 0, 2 * base.dim())),
      second_(composable_, arrows_, coords(composable_, base.dim(), 2 * base.dim())),
      charts_(base, base.dim()) {}

ChartMap PairGroupoid::algebroid_inclusion() const {
  const std::size_t n = base_.dim();
  tanlift::TangentChart tg(arrows_);
  const Chart& a = charts_.bundle;
  std::vector<Expr> comps = concat(coords(a, 0, n), coords(a, 0, n));
  comps = concat(comps, coords(a, n, n));
  comps.resize(4 * n);
  return ChartMap(a, tg.total(), std::move(comps));
}

KForm PairGroupoid::telescoped(const KForm& beta) const { return pullback(target_, beta) - pullback(source_, beta); }

bool PairGroupoidReport::passed() const {
  return multiplicative.outcome.passed() && structure_maps.outcome.passed() && relatively_closed.outcome.passed() &&
         relation.outcome.passed();
}

PairGroupoidReport pair_groupoid_check(const PairGroupoid& g, const KForm& omega, const sym::CheckOptions& opts) {
  if (!(omega.chart() == g.arrows()) || omega.degree() != 2)
    throw std::invalid_argument("omega must be a 2-form on the arrow chart");
  const Chart& base = g.base();
  const std::size_t n = base.dim();
  PairGroupoidReport report;

  std::vector<sym::Comparison> maps;
  auto compare_maps = [&](const std::string& label, const ChartMap& a, const ChartMap& b) {
    for (std::size_t i = 0; i < n; ++i)
      maps.push_back({label + " " + base.name(i), a.components()[i], b.components()[i]});
  };
  compare_maps("s o m = s o p2", g.source().after(g.multiplication()), g.source().after(g.second()));
  compare_maps("t o m = t o p1", g.target().after(g.multiplication()), g.target().after(g.first()));
  report.structure_maps = {"structure maps", sym::compare_all(maps, opts)};

  report.multiplicative = {
      "multiplicative",
      cartan::forms_equal(pullback(g.multiplication(), omega),
                          pullback(g.first(), omega) + pullback(g.second(), omega), opts)};

  tanlift::TangentChart tg(g.arrows());
  report.lie_form = pullback(g.algebroid_inclusion(), tanlift::tangent_lift(tg, omega));

  // Restrict to units and rename the first copy to the base coordinates.
  std::map<std::string, Expr, std::less<>> at_units;
  for (std::size_t i = 0; i < n; ++i) {
    at_units[g.arrows().name(i)] = base.coordinate(i);
    at_units[g.arrows().name(n + i)] = base.coordinate(i);
  }
  report.sigma = zero_matrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t dd = 0; dd < n; ++dd) {
      int a = static_cast<int>(dd), b = static_cast<int>(j);
      report.sigma[j][dd] =
          (omega.component({a, b}) + omega.component({a, static_cast<int>(n) + b})).substitute(at_units);
    }

  KForm domega = d(omega);
  report.phi = KForm(base, 3);
  for (int i = 0; i < static_cast<int>(n); ++i)
    for (int j = i + 1; j < static_cast<int>(n); ++j)
      for (int k = j + 1; k < static_cast<int>(n); ++k)
        report.phi.add({i, j, k}, -domega.component({i, j, k}).substitute(at_units));
  report.relatively_closed = {
      "relatively closed",
      cartan::forms_equal(domega, pullback(g.source(), report.phi) - pullback(g.target(), report.phi), opts)};
  if (!report.relatively_closed.outcome.passed()) report.relatively_closed.outcome.note = "not relatively phi-closed";

  report.relation.name = "relation";
  try {
    IM2FormData data(algebroid::tangent_bundle_algebroid(base), report.sigma, report.phi, opts);
    report.relation.outcome = cartan::forms_equal(report.lie_form, imform::build_lambda(data).form, opts);
  } catch (const std::invalid_argument& e) {
    report.relation.outcome.verdict = sym::Verdict::Inconclusive;
    report.relation.outcome.note = e.what();
  }
  return report;
}

}  // namespace imcheck::catalog
