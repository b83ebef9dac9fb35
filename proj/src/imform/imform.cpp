#include "imcheck/imform/imform.hpp"

#include <functional>
#include <stdexcept>

#include "imcheck/tanlift/tangent.hpp"

namespace imcheck::imform {

namespace {

std::string idx(std::initializer_list<std::size_t> values) {
  std::string s = "(";
  for (auto v : values) s += (s.size() > 1 ? "," : "") + std::to_string(v + 1);
  return s + ")";
}

bool vanishes(const Expr& e) { return e.is_zero() || sym::expr_equal(e, 0).passed(); }

KForm one_form(const Chart& chart, const std::vector<Expr>& comps) {
  KForm out(chart, 1);
  for (std::size_t j = 0; j < comps.size(); ++j) out.add({static_cast<int>(j)}, comps[j]);
  return out;
}

using Substitution = std::map<std::string, Expr, std::less<>>;

}  // namespace

// ---- data ----

IM2FormData::IM2FormData(LieAlgebroid algebroid, Matrix sigma, KForm phi, const sym::CheckOptions& opts)
    : algebroid_(std::move(algebroid)),
      sigma_(std::move(sigma)),
      phi_(std::move(phi)),
      charts_(algebroid_.base(), algebroid_.rank()) {
  const std::size_t n = dim(), r = rank();
  if (sigma_.size() != n) throw std::invalid_argument("sigma must have one row per base coordinate");
  for (const auto& row : sigma_) {
    if (row.size() != r) throw std::invalid_argument("sigma must have one column per frame section");
    for (const auto& e : row)
      for (const auto& v : e.free_variables())
        if (!algebroid_.base().index_of(v)) throw std::invalid_argument("sigma uses '" + v + "' outside the base chart");
  }
  if (!(phi_.chart() == algebroid_.base()) || phi_.degree() != 3)
    throw std::invalid_argument("phi must be a 3-form on the base chart");
  auto closed = cartan::forms_equal(d(phi_), KForm(algebroid_.base(), 4), opts);
  if (!closed.passed()) throw std::invalid_argument("phi is not closed");
}

IM2FormData::IM2FormData(LieAlgebroid algebroid, Matrix sigma)
    : IM2FormData(algebroid, std::move(sigma), KForm(algebroid.base(), 3)) {}

KForm IM2FormData::sigma_of(const Section& u) const {
  std::vector<Expr> comps(dim());
  for (std::size_t j = 0; j < dim(); ++j)
    for (std::size_t a = 0; a < rank(); ++a) comps[j] += sigma_[j][a] * u[a];
  return one_form(algebroid_.base(), comps);
}

ChartMap IM2FormData::sigma_map() const {
  tanlift::CotangentChart cot(algebroid_.base());
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < dim(); ++j) comps.push_back(charts_.base.coordinate(j));
  for (std::size_t j = 0; j < dim(); ++j) {
    Expr p;
    for (std::size_t a = 0; a < rank(); ++a) p += charts_.fibre.coordinate(a) * sigma_[j][a];
    comps.push_back(p);
  }
  return ChartMap(charts_.bundle, cot.total(), std::move(comps));
}

ChartMap IM2FormData::anchor_map() const {
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < dim(); ++j) comps.push_back(charts_.base.coordinate(j));
  for (std::size_t j = 0; j < dim(); ++j) {
    Expr v;
    for (std::size_t a = 0; a < rank(); ++a) v += algebroid_.anchor(j, a) * charts_.fibre.coordinate(a);
    comps.push_back(v);
  }
  return ChartMap(charts_.bundle, charts_.tangent.total(), std::move(comps));
}

// ---- IM conditions ----

Expr im1_pairing(const IM2FormData& data, const Section& u, const Section& v) {
  const auto& al = data.algebroid();
  KForm su = data.sigma_of(u), sv = data.sigma_of(v);
  cartan::VField ru = al.anchor_of(u), rv = al.anchor_of(v);
  Expr s;
  for (std::size_t j = 0; j < data.dim(); ++j) {
    int i = static_cast<int>(j);
    s += su.component({i}) * rv[j] + sv.component({i}) * ru[j];
  }
  return s;
}

KForm im2_defect(const IM2FormData& data, const Section& u, const Section& v) {
  const auto& al = data.algebroid();
  cartan::VField ru = al.anchor_of(u), rv = al.anchor_of(v);
  KForm su = data.sigma_of(u), sv = data.sigma_of(v);
  KForm rhs = lie_derivative(ru, sv) - interior(rv, d(su)) + interior(rv, interior(ru, data.phi()));
  return data.sigma_of(al.bracket(u, v)) - rhs;
}

IMReport check_im(const IM2FormData& data, const sym::CheckOptions& opts) {
  const std::size_t r = data.rank();
  std::vector<sym::Comparison> im1, im2;
  KForm zero(data.algebroid().base(), 1);
  for (std::size_t a = 0; a < r; ++a) {
    Section ea = Section::basis(r, a);
    for (std::size_t b = 0; b < r; ++b) {
      Section eb = Section::basis(r, b);
      if (a <= b) im1.push_back({"IM1 (a,b) = " + idx({a, b}), im1_pairing(data, ea, eb), Expr(0)});
      auto c = cartan::component_comparisons("IM2 (a,b) = " + idx({a, b}), im2_defect(data, ea, eb), zero);
      im2.insert(im2.end(), c.begin(), c.end());
    }
  }
  return {{"IM1", sym::compare_all(im1, opts)}, {"IM2", sym::compare_all(im2, opts)}};
}

// ---- linear forms ----

LinearForm decompose_linear(const KForm& form, const BundleCharts& charts) {
  const std::size_t n = charts.dim(), r = charts.rank();
  LinearForm out;
  out.form = form;
  out.lambda.assign(n, std::vector<Expr>(r));
  out.horizontal.assign(n, Matrix(n, std::vector<Expr>(r)));
  if (!(form.chart() == charts.bundle) || form.degree() != 2) {
    out.shape_note = "not a 2-form on the bundle chart";
    return out;
  }
  Substitution at_zero;
  for (const auto& u : charts.fibre.names()) at_zero[u] = Expr(0);
  auto fibre = [&](std::size_t d) { return charts.fibre.name(d); };

  out.linear = true;
  for (const auto& [ij, c] : form.components()) {
    const auto i = static_cast<std::size_t>(ij[0]), j = static_cast<std::size_t>(ij[1]);
    const std::string where = "coefficient of " + KForm::basis(charts.bundle, ij).str();
    if (j < n) {
      if (!vanishes(c.substitute(at_zero))) {
        out.linear = false;
        out.shape_note = where + " does not vanish on the zero section";
      }
      for (std::size_t d = 0; d < r; ++d) {
        Expr slope = c.diff(fibre(d));
        for (std::size_t e = 0; e < r; ++e)
          if (!vanishes(slope.diff(fibre(e)))) {
            out.linear = false;
            out.shape_note = where + " is not linear in the fibre";
          }
        out.horizontal[i][j][d] = slope;
        out.horizontal[j][i][d] = -slope;
      }
    } else if (i < n) {
      for (std::size_t e = 0; e < r; ++e)
        if (!vanishes(c.diff(fibre(e)))) {
          out.linear = false;
          out.shape_note = where + " depends on the fibre";
        }
      out.lambda[i][j - n] = c;
    } else {
      out.linear = false;
      out.shape_note = where + " is a fibre-fibre term";
    }
  }
  return out;
}

KForm canonical_pullback(const Matrix& lambda, const BundleCharts& charts) {
  const std::size_t n = charts.dim(), r = charts.rank();
  tanlift::CotangentChart cot(charts.base);
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < n; ++j) comps.push_back(charts.base.coordinate(j));
  for (std::size_t j = 0; j < n; ++j) {
    Expr p;
    for (std::size_t d = 0; d < r; ++d) p += charts.fibre.coordinate(d) * lambda.at(j).at(d);
    comps.push_back(p);
  }
  return pullback(ChartMap(charts.bundle, cot.total(), std::move(comps)), cot.omega_can());
}

LinearForm build_lambda(const IM2FormData& data) {
  const auto& charts = data.charts();
  tanlift::CotangentChart cot(charts.base);
  KForm sigma_part = pullback(data.sigma_map(), cot.omega_can());
  KForm twist = pullback(data.anchor_map(), tanlift::tau(charts.tangent, data.phi()));
  return decompose_linear(-(sigma_part + twist), charts);
}

ChartMap lambda_sharp(const IM2FormData& data) {
  const auto& charts = data.charts();
  const auto& al = data.algebroid();
  const std::size_t n = data.dim(), r = data.rank();
  const auto& sigma = data.sigma();
  const auto& tab = charts.tangent_bundle;
  auto x_name = [&](std::size_t i) { return charts.base.name(i); };
  auto u = [&](std::size_t d) { return charts.fibre.coordinate(d); };
  auto xdot = [&](std::size_t l) { return tab.velocity(l); };
  auto udot = [&](std::size_t d) { return tab.velocity(n + d); };

  std::vector<Expr> comps;
  for (std::size_t i = 0; i < n + r; ++i) comps.push_back(charts.bundle.coordinate(i));
  for (std::size_t j = 0; j < n; ++j) {
    Expr p;
    for (std::size_t d = 0; d < r; ++d) {
      for (std::size_t l = 0; l < n; ++l)
        p += xdot(l) * u(d) * (sigma[j][d].diff(x_name(l)) - sigma[l][d].diff(x_name(j)));
      p += udot(d) * sigma[j][d];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          Expr phi = data.phi().component({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
          if (!phi.is_zero()) p -= phi * u(d) * al.anchor(k, d) * xdot(i);
        }
    }
    comps.push_back(p);
  }
  for (std::size_t d = 0; d < r; ++d) {
    Expr z;
    for (std::size_t l = 0; l < n; ++l) z -= xdot(l) * sigma[l][d];
    comps.push_back(z);
  }
  return ChartMap(tab.total(), charts.cotangent_bundle, std::move(comps));
}

ChartMap contraction_sharp(const KForm& form, const BundleCharts& charts) {
  const std::size_t m = charts.bundle.dim();
  const auto& tab = charts.tangent_bundle;
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < m; ++i) comps.push_back(charts.bundle.coordinate(i));
  for (std::size_t b = 0; b < m; ++b) {
    Expr c;
    for (std::size_t a = 0; a < m; ++a) c += tab.velocity(a) * form.component({static_cast<int>(a), static_cast<int>(b)});
    comps.push_back(c);
  }
  return ChartMap(tab.total(), charts.cotangent_bundle, std::move(comps));
}

std::vector<sym::Comparison> map_comparisons(const std::string& label, const ChartMap& a, const ChartMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw std::invalid_argument("map_comparisons: chart mismatch");
  std::vector<sym::Comparison> out;
  for (std::size_t i = 0; i < a.target().dim(); ++i)
    out.push_back({label + " " + a.target().name(i), a.components()[i], b.components()[i]});
  return out;
}

// ---- morphism ----

std::vector<Expr> frame_image(const IM2FormData& data, std::size_t generator) {
  const auto& charts = data.charts();
  const std::size_t n = data.dim(), r = data.rank();
  ChartMap sharp = lambda_sharp(data);
  // Te_a sits at u = e_a, u̇ = 0; ê_a at u = 0, u̇ = e_a.
  Substitution at;
  for (std::size_t d = 0; d < r; ++d) {
    at[charts.fibre.name(d)] = Expr(generator == d ? 1 : 0);
    at[charts.tangent_bundle.fibre().name(n + d)] = Expr(generator == r + d ? 1 : 0);
  }
  std::vector<Expr> out;
  for (std::size_t a = 0; a < r; ++a) out.push_back(sharp.components()[n + a].substitute(at));
  for (std::size_t j = 0; j < n; ++j) out.push_back(sharp.components()[n + r + j].substitute(at));
  return out;
}

sym::Verdict MorphismReport::verdict() const {
  sym::Verdict v = sym::Verdict::Pass;
  for (const auto& c : cases) v = sym::combine(v, c.outcome.verdict);
  return v;
}

const NamedCheck& MorphismReport::find(std::string_view name) const {
  for (const auto& c : cases)
    if (c.name == name) return c;
  throw std::out_of_range("no morphism case named " + std::string(name));
}

MorphismReport check_morphism(const IM2FormData& data, const sym::CheckOptions& opts) {
  const auto& charts = data.charts();
  const auto& al = data.algebroid();
  const std::size_t n = data.dim(), r = data.rank();
  const auto& tm = charts.tangent;

  LieAlgebroid ta = algebroid::tangent_algebroid(al, tm);
  LieAlgebroid tsa = algebroid::cotangent_algebroid(al, charts.dual);
  ChartMap sharp = lambda_sharp(data);

  // ψ = −σ^t: TM -> A*
  std::vector<Expr> psi_comps;
  for (std::size_t j = 0; j < n; ++j) psi_comps.push_back(charts.base.coordinate(j));
  for (std::size_t d = 0; d < r; ++d) {
    Expr xi;
    for (std::size_t l = 0; l < n; ++l) xi -= tm.velocity(l) * data.sigma()[l][d];
    psi_comps.push_back(xi);
  }
  ChartMap psi(tm.total(), charts.dual, psi_comps);

  std::vector<std::vector<Expr>> images;
  for (std::size_t g = 0; g < 2 * r; ++g) images.push_back(frame_image(data, g));
  const std::size_t frame = r + n;
  auto frame_name = [&](std::size_t m) { return tsa.section_name(m); };

  auto covering = [&] {
    std::vector<sym::Comparison> cmp;
    // ζ = −σ^t(ẋ) on every fibre of TA, and the base point of A is kept.
    for (std::size_t d = 0; d < r; ++d)
      cmp.push_back({"covering " + charts.cotangent_bundle.name(2 * n + r + d), sharp.components()[2 * n + r + d],
                     psi_comps[n + d]});
    for (std::size_t i = 0; i < n + r; ++i)
      cmp.push_back({"covering " + charts.cotangent_bundle.name(i), sharp.components()[i], charts.bundle.coordinate(i)});
    return cmp;
  };

  // T(−σ^t)(ρ_TA(U)) against ρ_T*A(Λ♯(U)) at ψ(x, ẋ).
  auto anchor_case = [&](const std::string& label, std::size_t first, std::size_t count) {
    std::vector<sym::Comparison> cmp;
    for (std::size_t g = first; g < first + count; ++g) {
      cartan::VField v = ta.anchor_field(g);
      for (std::size_t k = 0; k < n + r; ++k) {
        Expr lhs;
        if (k < n) {
          lhs = v[k];
        } else {
          for (std::size_t b = 0; b < 2 * n; ++b) lhs += psi_comps[k].diff(tm.total().name(b)) * v[b];
        }
        Expr rhs;
        for (std::size_t h = 0; h < frame; ++h)
          if (!images[g][h].is_zero()) rhs += images[g][h] * psi.pull(tsa.anchor(k, h));
        cmp.push_back({label + " " + ta.section_name(g) + " ∂" + charts.dual.name(k), lhs, rhs});
      }
    }
    return cmp;
  };

  // Ψ([U,V]) = F_g(U) F_h(V) ψ^*[G_g, G_h] + ρ_TA(U)(F_h(V)) G_h − ρ_TA(V)(F_g(U)) G_g
  auto bracket_pair = [&](const std::string& label, std::size_t i, std::size_t j, std::vector<sym::Comparison>& cmp) {
    Section c = ta.bracket(Section::basis(2 * r, i), Section::basis(2 * r, j));
    std::vector<Expr> lhs(frame), rhs(frame);
    for (std::size_t k = 0; k < 2 * r; ++k)
      if (!c[k].is_zero())
        for (std::size_t m = 0; m < frame; ++m) lhs[m] += c[k] * images[k][m];
    const auto& fu = images[i];
    const auto& fv = images[j];
    cartan::VField ru = ta.anchor_field(i), rv = ta.anchor_field(j);
    for (std::size_t m = 0; m < frame; ++m) {
      Expr s = ru.apply(fv[m]) - rv.apply(fu[m]);
      for (std::size_t g = 0; g < frame; ++g) {
        if (fu[g].is_zero()) continue;
        for (std::size_t h = 0; h < frame; ++h)
          if (!fv[h].is_zero() && !tsa.structure(m, g, h).is_zero())
            s += fu[g] * fv[h] * psi.pull(tsa.structure(m, g, h));
      }
      rhs[m] = s;
    }
    for (std::size_t m = 0; m < frame; ++m)
      cmp.push_back({label + " [" + ta.section_name(i) + "," + ta.section_name(j) + "] " + frame_name(m), lhs[m],
                     rhs[m]});
  };
  auto bracket_case = [&](const std::string& label, std::size_t first_u, std::size_t first_v) {
    std::vector<sym::Comparison> cmp;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) bracket_pair(label, first_u + a, first_v + b, cmp);
    return cmp;
  };

  const std::vector<std::pair<std::string, std::function<std::vector<sym::Comparison>()>>> tasks{
      {"covering", covering},
      {"anchor-core", [&] { return anchor_case("anchor-core", r, r); }},
      {"anchor-linear", [&] { return anchor_case("anchor-linear", 0, r); }},
      {"core-core", [&] { return bracket_case("core-core", r, r); }},
      {"core-linear", [&] { return bracket_case("core-linear", 0, r); }},
      {"linear-linear", [&] { return bracket_case("linear-linear", 0, 0); }},
  };

  MorphismReport report;
  report.cases.resize(tasks.size());
  sym::CheckOptions inner = opts;
  inner.parallel = false;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks.size()); ++t) {
    const auto& [name, build] = tasks[static_cast<std::size_t>(t)];
    report.cases[static_cast<std::size_t>(t)] = {name, sym::compare_all(build(), inner)};
  }
  report.im = check_im(data, opts);
  return report;
}

// ---- analysis ----

LinearAnalysis analyze_linear(const KForm& form, const BundleCharts& charts, const sym::CheckOptions& opts) {
  LinearAnalysis out;
  out.form = decompose_linear(form, charts);
  if (!(form.chart() == charts.bundle) || form.degree() != 2) {
    out.closed.verdict = out.reconstructs.verdict = sym::Verdict::Fail;
    out.closed.note = out.reconstructs.note = out.form.shape_note;
    return out;
  }
  out.closed = cartan::forms_equal(d(form), KForm(charts.bundle, 3), opts);
  if (out.form.linear) {
    out.reconstructs = cartan::forms_equal(form, canonical_pullback(out.form.lambda, charts), opts);
  } else {
    out.reconstructs.verdict = sym::Verdict::Fail;
    out.reconstructs.note = "not linear: " + out.form.shape_note;
  }
  return out;
}

}  // namespace imcheck::imform
