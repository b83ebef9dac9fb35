#include "imcheck/algebroid/algebroid.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "imcheck/symexpr/random.hpp"

namespace imcheck::algebroid {

namespace {

std::string idx(std::initializer_list<std::size_t> values) {
  std::string s = "(";
  for (auto v : values) s += (s.size() > 1 ? "," : "") + std::to_string(v + 1);
  return s + ")";
}

void require_base_only(const Chart& base, const Expr& e, const char* what) {
  for (const auto& v : e.free_variables())
    if (!base.index_of(v)) throw std::invalid_argument(std::string(what) + " uses '" + v + "' outside the base chart");
}

std::vector<std::string> fresh(std::set<std::string>& taken, const std::vector<std::string>& wanted) {
  std::vector<std::string> out;
  for (auto name : wanted) {
    while (taken.count(name)) name += "_";
    taken.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

std::vector<std::string> numbered(std::string_view stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(stem) + std::to_string(i));
  return out;
}

// Core-section label: a combining circumflex over the first character.
std::string hat(const std::string& name) {
  std::size_t len = 1;
  auto lead = static_cast<unsigned char>(name[0]);
  if (lead >= 0xF0) len = 4;
  else if (lead >= 0xE0) len = 3;
  else if (lead >= 0xC0) len = 2;
  return name.substr(0, len) + "\u0302" + name.substr(len);
}

Structure zero_structure(std::size_t r) { return Structure(r, Matrix(r, std::vector<Expr>(r))); }

// ẋ^k ∂_k f
Expr directional(const tanlift::TangentChart& tm, const Expr& f) {
  Expr out;
  for (std::size_t k = 0; k < tm.base_dim(); ++k) out += f.diff(tm.base().name(k)) * tm.velocity(k);
  return out;
}

}  // namespace

// ---- Section ----

Section Section::basis(std::size_t rank, std::size_t a) {
  Section s{std::vector<Expr>(rank)};
  s.components.at(a) = Expr(1);
  return s;
}

Section operator+(const Section& u, const Section& v) {
  Section out = u;
  for (std::size_t a = 0; a < out.components.size(); ++a) out.components[a] += v.components.at(a);
  return out;
}

Section operator-(const Section& u, const Section& v) { return u + Expr(-1) * v; }

Section operator*(const Expr& f, const Section& u) {
  Section out = u;
  for (auto& c : out.components) c = f * c;
  return out;
}

// ---- LieAlgebroid ----

LieAlgebroid::LieAlgebroid(Chart base, Matrix anchor, Structure structure, std::vector<std::string> names)
    : base_(std::move(base)), anchor_(std::move(anchor)), structure_(std::move(structure)), names_(std::move(names)) {
  const std::size_t n = base_.dim(), r = structure_.size();
  if (anchor_.size() != n) throw std::invalid_argument("anchor must have one row per base coordinate");
  for (const auto& row : anchor_) {
    if (row.size() != r) throw std::invalid_argument("anchor must have one column per frame section");
    for (const auto& e : row) require_base_only(base_, e, "anchor");
  }
  for (const auto& m : structure_) {
    if (m.size() != r) throw std::invalid_argument("structure functions must be rank x rank x rank");
    for (const auto& row : m) {
      if (row.size() != r) throw std::invalid_argument("structure functions must be rank x rank x rank");
      for (const auto& e : row) require_base_only(base_, e, "structure function");
    }
  }
  if (names_.empty()) names_ = numbered("e", r);
  if (names_.size() != r) throw std::invalid_argument("one name per frame section required");
}

VField LieAlgebroid::anchor_field(std::size_t a) const {
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < dim(); ++j) comps.push_back(anchor_[j][a]);
  return VField(base_, std::move(comps));
}

VField LieAlgebroid::anchor_of(const Section& u) const {
  std::vector<Expr> comps(dim());
  for (std::size_t j = 0; j < dim(); ++j)
    for (std::size_t a = 0; a < rank(); ++a) comps[j] += anchor_[j][a] * u[a];
  return VField(base_, std::move(comps));
}

Section LieAlgebroid::bracket(const Section& u, const Section& v) const {
  const std::size_t r = rank();
  if (u.components.size() != r || v.components.size() != r) throw std::invalid_argument("section rank mismatch");
  VField ru = anchor_of(u), rv = anchor_of(v);
  Section out{std::vector<Expr>(r)};
  for (std::size_t c = 0; c < r; ++c) {
    Expr s = ru.apply(v[c]) - rv.apply(u[c]);
    for (std::size_t a = 0; a < r; ++a) {
      if (u[a].is_zero()) continue;
      for (std::size_t b = 0; b < r; ++b)
        if (!v[b].is_zero() && !structure_[c][a][b].is_zero()) s += u[a] * v[b] * structure_[c][a][b];
    }
    out.components[c] = s;
  }
  return out;
}

// ---- standard algebroids ----

LieAlgebroid tangent_bundle_algebroid(const Chart& base) {
  const std::size_t n = base.dim();
  Matrix anchor(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j) anchor[j][j] = Expr(1);
  std::vector<std::string> names;
  for (const auto& x : base.names()) names.push_back("∂" + x);
  return LieAlgebroid(base, std::move(anchor), zero_structure(n), std::move(names));
}

LieAlgebroid lie_algebra(Structure constants) {
  return LieAlgebroid(Chart(), Matrix{}, std::move(constants));
}

LieAlgebroid koszul_algebroid(const Chart& base, const Matrix& poisson) {
  const std::size_t n = base.dim();
  if (poisson.size() != n) throw std::invalid_argument("Poisson tensor must be n x n");
  Matrix anchor(n, std::vector<Expr>(n));
  Structure c = zero_structure(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (poisson[a].size() != n) throw std::invalid_argument("Poisson tensor must be n x n");
    for (std::size_t j = 0; j < n; ++j) anchor[j][a] = poisson[a][j];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) c[k][a][b] = poisson[a][b].diff(base.name(k));
  std::vector<std::string> names;
  for (const auto& x : base.names()) names.push_back("d" + x);
  return LieAlgebroid(base, std::move(anchor), std::move(c), std::move(names));
}

// ---- axioms ----

bool AxiomReport::passed() const { return verdict() == sym::Verdict::Pass; }

sym::Verdict AxiomReport::verdict() const {
  sym::Verdict v = sym::Verdict::Pass;
  for (const auto& c : checks) v = sym::combine(v, c.outcome.verdict);
  return v;
}

AxiomReport check_axioms(const LieAlgebroid& al, const sym::CheckOptions& opts) {
  const std::size_t n = al.dim(), r = al.rank();
  std::vector<sym::Comparison> antisym, anchor, jacobi;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        antisym.push_back({"C^c_ab + C^c_ba, (a,b,c) = " + idx({a, b, c}), al.structure(c, a, b),
                           -al.structure(c, b, a)});

  for (std::size_t a = 0; a < r; ++a) {
    VField ra = al.anchor_field(a);
    for (std::size_t b = a + 1; b < r; ++b) {
      VField rb = al.anchor_field(b);
      for (std::size_t j = 0; j < n; ++j) {
        Expr lhs;
        for (std::size_t c = 0; c < r; ++c) lhs += al.anchor(j, c) * al.structure(c, a, b);
        anchor.push_back({"rho([e_a,e_b])^j, (a,b,j) = " + idx({a, b, j}), lhs,
                          ra.apply(al.anchor(j, b)) - rb.apply(al.anchor(j, a))});
      }
    }
  }

  std::vector<VField> fields;
  for (std::size_t a = 0; a < r; ++a) fields.push_back(al.anchor_field(a));
  // Σ_cyclic [e_a, [e_b, e_c]]^e = Σ_cyclic (C^e_ad C^d_bc + ρ(e_a) C^e_bc)
  auto term = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    Expr s = fields[a].apply(al.structure(e, b, c));
    for (std::size_t d = 0; d < r; ++d) s += al.structure(e, a, d) * al.structure(d, b, c);
    return s;
  };
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        for (std::size_t e = 0; e < r; ++e)
          jacobi.push_back({"Jacobi, (a,b,c,e) = " + idx({a, b, c, e}),
                            term(a, b, c, e) + term(b, c, a, e) + term(c, a, b, e), Expr(0)});

  AxiomReport report;
  report.checks.push_back({"antisymmetry", sym::compare_all(antisym, opts)});
  report.checks.push_back({"anchor", sym::compare_all(anchor, opts)});
  report.checks.push_back({"jacobi", sym::compare_all(jacobi, opts)});
  return report;
}

// ---- charts and prolongations ----

BundleCharts::BundleCharts(const Chart& base_chart, std::size_t r)
    : base(base_chart),
      tangent(base_chart),
      tangent_bundle(base_chart) {
  std::set<std::string> taken(base.names().begin(), base.names().end());
  for (const auto& v : tangent.fibre().names()) taken.insert(v);
  fibre = Chart(fresh(taken, numbered("u", r)));
  dual_fibre = Chart(fresh(taken, numbered("ξ", r)));
  bundle = base + fibre;
  dual = base + dual_fibre;
  tangent_bundle = tanlift::TangentChart(bundle);
  std::vector<std::string> momenta;
  for (const auto& x : base.names()) momenta.push_back("p_" + x);
  std::vector<std::string> core = numbered("ζ", r);
  std::set<std::string> bundle_names(bundle.names().begin(), bundle.names().end());
  auto p = fresh(bundle_names, momenta);
  auto z = fresh(bundle_names, core);
  p.insert(p.end(), z.begin(), z.end());
  cotangent_bundle = bundle + Chart(std::move(p));
}

LieAlgebroid tangent_algebroid(const LieAlgebroid& al, const tanlift::TangentChart& tm) {
  if (!(tm.base() == al.base())) throw std::invalid_argument("tangent_algebroid: chart mismatch");
  const std::size_t n = al.dim(), r = al.rank();
  Matrix anchor(2 * n, std::vector<Expr>(2 * r));
  Structure c = zero_structure(2 * r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t j = 0; j < n; ++j) {
      anchor[j][a] = al.anchor(j, a);
      anchor[n + j][a] = directional(tm, al.anchor(j, a));
      anchor[n + j][r + a] = al.anchor(j, a);
    }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t k = 0; k < r; ++k) {
        const Expr& cab = al.structure(k, a, b);
        c[k][a][b] = cab;
        c[r + k][a][b] = directional(tm, cab);
        c[r + k][a][r + b] = cab;
        c[r + k][r + a][b] = -al.structure(k, b, a);
      }
  std::vector<std::string> names;
  for (const auto& e : al.section_names()) names.push_back("T" + e);
  for (const auto& e : al.section_names()) names.push_back(hat(e));
  return LieAlgebroid(tm.total(), std::move(anchor), std::move(c), std::move(names));
}

LieAlgebroid cotangent_algebroid(const LieAlgebroid& al, const Chart& dual) {
  const std::size_t n = al.dim(), r = al.rank();
  if (dual.dim() != n + r) throw std::invalid_argument("cotangent_algebroid: chart mismatch");
  for (std::size_t j = 0; j < n; ++j)
    if (dual.name(j) != al.base().name(j)) throw std::invalid_argument("cotangent_algebroid: chart mismatch");
  auto xi = [&](std::size_t c) { return dual.coordinate(n + c); };

  Matrix anchor(n + r, std::vector<Expr>(r + n));
  Structure c = zero_structure(r + n);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      anchor[i][a] = al.anchor(i, a);
      anchor[n + a][r + i] = al.anchor(i, a);
    }
    for (std::size_t b = 0; b < r; ++b) {
      Expr s;
      for (std::size_t k = 0; k < r; ++k) s += al.structure(k, a, b) * xi(k);
      anchor[n + b][a] = s;
    }
  }
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      for (std::size_t k = 0; k < r; ++k) c[k][a][b] = al.structure(k, a, b);
      for (std::size_t m = 0; m < n; ++m) {
        Expr s;
        for (std::size_t k = 0; k < r; ++k) s -= al.structure(k, a, b).diff(al.base().name(m)) * xi(k);
        c[r + m][a][b] = s;
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) {
        Expr drho = al.anchor(j, a).diff(al.base().name(m));
        c[r + m][a][r + j] = drho;
        c[r + m][r + j][a] = -drho;
      }
  }
  std::vector<std::string> names;
  for (const auto& e : al.section_names()) names.push_back(e + "^L");
  for (const auto& x : al.base().names()) names.push_back(hat("d" + x));
  return LieAlgebroid(dual, std::move(anchor), std::move(c), std::move(names));
}

// ---- randomized triples ----

RandomTripleResult random_triple_check(const LieAlgebroid& al, std::size_t triples, std::uint64_t seed) {
  const std::size_t r = al.rank();
  const auto& vars = al.base().names();
  std::vector<double> jac(triples), anti(triples), anc(triples);
  std::vector<char> domain(triples, 0);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(triples); ++t) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1));
    auto random_section = [&] {
      Section s{std::vector<Expr>(r)};
      for (auto& c : s.components) c = sym::random_polynomial(vars, rng, {2, 2, 3});
      return s;
    };
    Section u = random_section(), v = random_section(), w = random_section();
    sym::Point point;
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (const auto& x : vars) point[x] = box(rng);

    Section j = al.bracket(u, al.bracket(v, w)) + al.bracket(v, al.bracket(w, u)) + al.bracket(w, al.bracket(u, v));
    Section uv = al.bracket(u, v);
    Section s = uv + al.bracket(v, u);
    VField lhs = al.anchor_of(uv);
    VField rhs = cartan::field_bracket(al.anchor_of(u), al.anchor_of(v));
    auto i = static_cast<std::size_t>(t);
    try {
      for (std::size_t c = 0; c < r; ++c) {
        jac[i] = std::max(jac[i], std::abs(j[c].evaluate(point)));
        anti[i] = std::max(anti[i], std::abs(s[c].evaluate(point)));
      }
      for (std::size_t k = 0; k < al.dim(); ++k)
        anc[i] = std::max(anc[i], std::abs(lhs[k].evaluate(point) - rhs[k].evaluate(point)));
    } catch (const sym::DomainError&) {
      domain[i] = 1;
    }
  }

  RandomTripleResult out;
  out.triples = triples;
  for (std::size_t i = 0; i < triples; ++i) {
    out.max_jacobi = std::max(out.max_jacobi, jac[i]);
    out.max_antisymmetry = std::max(out.max_antisymmetry, anti[i]);
    out.max_anchor = std::max(out.max_anchor, anc[i]);
    out.domain_errors += static_cast<std::size_t>(domain[i]);
  }
  return out;
}

}  // namespace imcheck::algebroid
