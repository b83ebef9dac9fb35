#include <gtest/gtest.h>

#include <random>

#include "imcheck/algebroid/algebroid.hpp"
#include "imcheck/cartan/identities.hpp"
#include "imcheck/symexpr/parser.hpp"

using namespace imcheck;
using namespace imcheck::algebroid;
using sym::parse;

namespace {

const Chart kR3 = Chart::parse_list("x1,x2,x3");

Structure epsilon_structure() {
  Structure c(3, Matrix(3, std::vector<Expr>(3)));
  const int perms[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}, {1, 0, 2, -1}, {2, 1, 0, -1}, {0, 2, 1, -1}};
  for (const auto& p : perms) c[p[2]][p[0]][p[1]] = Expr(p[3]);
  return c;
}

Matrix so3_poisson() {
  return {{0, parse("x3"), parse("-x2")}, {parse("-x3"), 0, parse("x1")}, {parse("x2"), parse("-x1"), 0}};
}

Section generator(const LieAlgebroid& al, std::size_t a) { return Section::basis(al.rank(), a); }

const AxiomCheck& find(const AxiomReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Axioms, TangentBundlePasses) {
  auto r = check_axioms(tangent_bundle_algebroid(kR3));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.checks.size(), 3u);
}

TEST(Axioms, So3OverPointPasses) { EXPECT_TRUE(check_axioms(lie_algebra(epsilon_structure())).passed()); }

TEST(Axioms, So3SingleEntryFlipFailsJacobi) {
  Structure c = epsilon_structure();
  c[2][0][1] = -c[2][0][1];
  auto r = check_axioms(lie_algebra(c));
  const auto& jac = find(r, "jacobi");
  EXPECT_EQ(jac.outcome.verdict, sym::Verdict::Fail);
  ASSERT_TRUE(jac.outcome.witness.has_value());
  EXPECT_NE(jac.outcome.witness->label.find("Jacobi"), std::string::npos);
}

TEST(Axioms, AnchorMismatchIsReported) {
  // ρ(e1) = ∂1, ρ(e2) = x1 ∂2 with zero bracket: [ρ(e1), ρ(e2)] = ∂2 ≠ 0.
  Chart c = Chart::parse_list("x1,x2");
  LieAlgebroid al(c, {{1, 0}, {0, parse("x1")}}, Structure(2, Matrix(2, std::vector<Expr>(2))));
  auto r = check_axioms(al);
  EXPECT_EQ(find(r, "anchor").outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(find(r, "jacobi").outcome.passed());
}

TEST(Construction, RejectsBadShapes) {
  EXPECT_THROW(LieAlgebroid(kR3, {{1}}, Structure(1, Matrix(1, std::vector<Expr>(1)))), std::invalid_argument);
  EXPECT_THROW(LieAlgebroid(Chart::parse_list("x1"), {{parse("y")}}, Structure(1, Matrix(1, std::vector<Expr>(1)))),
               std::invalid_argument);
}

TEST(Bracket, So3Generators) {
  LieAlgebroid al = lie_algebra(epsilon_structure());
  EXPECT_EQ(al.bracket(generator(al, 0), generator(al, 1)), generator(al, 2));
  EXPECT_EQ(al.bracket(generator(al, 2), generator(al, 1)), Expr(-1) * generator(al, 0));
}

TEST(Bracket, KoszulMatchesFormBracket) {
  // Oracle: [a, b]_π = L_{π♯a} b − L_{π♯b} a − d(π(a, b)) on 1-forms.
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  Matrix pi = so3_poisson();
  auto sharp = [&](const KForm& a) {
    std::vector<Expr> comps(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        comps[j] += a.component({static_cast<int>(i)}) * pi[i][j];
    return VField(kR3, comps);
  };
  auto koszul = [&](const KForm& a, const KForm& b) {
    Expr pab = interior(sharp(a), b).scalar_value();
    return lie_derivative(sharp(a), b) - lie_derivative(sharp(b), a) - d(KForm::scalar(kR3, pab));
  };
  auto as_section = [](const KForm& a) {
    Section s{std::vector<Expr>(3)};
    for (std::size_t i = 0; i < 3; ++i) s.components[i] = a.component({static_cast<int>(i)});
    return s;
  };
  EXPECT_EQ(al.bracket(generator(al, 0), generator(al, 1)), generator(al, 2));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 15; ++t) {
    KForm a = cartan::random_form(kR3, 1, rng, {2, 2, 3});
    KForm b = cartan::random_form(kR3, 1, rng, {2, 2, 3});
    EXPECT_EQ(al.bracket(as_section(a), as_section(b)), as_section(koszul(a, b)));
  }
  EXPECT_TRUE(check_axioms(al).passed());
}

TEST(Bracket, AntisymmetricAndLeibniz) {
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  std::mt19937_64 rng(2);
  auto rs = [&] {
    Section s{std::vector<Expr>(3)};
    for (auto& c : s.components) c = sym::random_polynomial(kR3.names(), rng, {2, 2, 3});
    return s;
  };
  for (int t = 0; t < 15; ++t) {
    Section u = rs(), v = rs();
    Expr f = sym::random_polynomial(kR3.names(), rng, {2, 2, 3});
    EXPECT_EQ(al.bracket(u, v), Expr(-1) * al.bracket(v, u));
    EXPECT_EQ(al.bracket(u, f * v), f * al.bracket(u, v) + al.anchor_of(u).apply(f) * v);
  }
}

TEST(TangentProlongation, GeneratorRelations) {
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  tanlift::TangentChart tm(kR3);
  LieAlgebroid ta = tangent_algebroid(al, tm);
  ASSERT_EQ(ta.rank(), 6u);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      EXPECT_EQ(ta.bracket(generator(ta, 3 + a), generator(ta, 3 + b)), Section{std::vector<Expr>(6)});
  EXPECT_EQ(ta.section_name(0), "Tdx1");
  EXPECT_EQ(ta.section_name(3), "d̂x1");
}

TEST(TangentProlongation, AnchorIsInvolutionOfTangentAnchor) {
  // Oracle: ρ_TA = J_M ∘ Tρ on the point (x, u, ẋ, u̇) of TA.
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  BundleCharts charts(kR3, 3);
  const auto& tm = charts.tangent;
  std::vector<Expr> rho_comps;
  for (std::size_t j = 0; j < 3; ++j) rho_comps.push_back(kR3.coordinate(j));
  for (std::size_t j = 0; j < 3; ++j) {
    Expr s;
    for (std::size_t a = 0; a < 3; ++a) s += al.anchor(j, a) * charts.fibre.coordinate(a);
    rho_comps.push_back(s);
  }
  cartan::ChartMap rho(charts.bundle, tm.total(), rho_comps);
  tanlift::TangentChart ttm(tm.total(), tanlift::FibreNaming::Delta);
  cartan::ChartMap t_rho = tanlift::tangent_map(rho, charts.tangent_bundle, ttm);
  cartan::ChartMap flipped = tanlift::canonical_involution(tm, ttm).after(t_rho);

  LieAlgebroid ta = tangent_algebroid(al, tm);
  const auto& tab = charts.tangent_bundle.total();  // (x, u, ẋ, u̇)
  for (std::size_t g = 0; g < 6; ++g) {
    // Te_a sits at u = e_a, u̇ = 0; ê_a at u = 0, u̇ = e_a.
    std::map<std::string, Expr, std::less<>> at;
    for (std::size_t a = 0; a < 3; ++a) {
      at[tab.name(3 + a)] = Expr(g == a ? 1 : 0);
      at[tab.name(9 + a)] = Expr(g == 3 + a ? 1 : 0);
    }
    VField expected = ta.anchor_field(g);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(flipped.components()[6 + k].substitute(at), expected[k]) << g << k;
  }
}

TEST(TangentProlongation, JacobiOnMixedTriple) {
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  LieAlgebroid ta = tangent_algebroid(al, tanlift::TangentChart(kR3));
  Section u = generator(ta, 0), v = generator(ta, 1), w = generator(ta, 5);
  Section j = ta.bracket(u, ta.bracket(v, w)) + ta.bracket(v, ta.bracket(w, u)) + ta.bracket(w, ta.bracket(u, v));
  EXPECT_EQ(j, Section{std::vector<Expr>(6)});
}

TEST(CotangentProlongation, GeneratorRelations) {
  LieAlgebroid al = koszul_algebroid(kR3, so3_poisson());
  BundleCharts charts(kR3, 3);
  LieAlgebroid tsa = cotangent_algebroid(al, charts.dual);
  ASSERT_EQ(tsa.rank(), 6u);
  // [d̂x^i, d̂x^j] = 0
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(tsa.bracket(generator(tsa, 3 + i), generator(tsa, 3 + j)), Section{std::vector<Expr>(6)});
  // [e_a^L, d̂x^j] = ∂_k ρ^j_a d̂x^k
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t j = 0; j < 3; ++j) {
      Section expected{std::vector<Expr>(6)};
      for (std::size_t k = 0; k < 3; ++k) expected.components[3 + k] = al.anchor(j, a).diff(kR3.name(k));
      EXPECT_EQ(tsa.bracket(generator(tsa, a), generator(tsa, 3 + j)), expected);
    }
  // ρ(d̂x^i) = ρ^i_a ∂/∂ξ_a
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Expr> comps(6);
    for (std::size_t a = 0; a < 3; ++a) comps[3 + a] = al.anchor(i, a);
    EXPECT_EQ(tsa.anchor_field(3 + i), VField(charts.dual, comps));
  }
}

TEST(Prolongations, AxiomsHoldForStandardAlgebroids) {
  std::vector<LieAlgebroid> all{tangent_bundle_algebroid(kR3), lie_algebra(epsilon_structure()),
                                koszul_algebroid(kR3, so3_poisson())};
  for (const auto& al : all) {
    BundleCharts charts(al.base(), al.rank());
    LieAlgebroid ta = tangent_algebroid(al, charts.tangent);
    LieAlgebroid tsa = cotangent_algebroid(al, charts.dual);
    for (const auto* p : {&ta, &tsa}) {
      auto r = check_axioms(*p);
      for (const auto& c : r.checks) {
        EXPECT_TRUE(c.outcome.passed()) << c.name << " " << (c.outcome.witness ? c.outcome.witness->label : "");
        EXPECT_EQ(c.outcome.numeric_comparisons, 0u);
      }
      auto rnd = random_triple_check(*p, 20, 5);
      EXPECT_LT(rnd.max_jacobi, 1e-10);
      EXPECT_LT(rnd.max_antisymmetry, 1e-10);
      EXPECT_LT(rnd.max_anchor, 1e-10);
    }
  }
}

TEST(BundleCharts, Names) {
  BundleCharts c(Chart::parse_list("x1,x2"), 1);
  EXPECT_EQ(c.bundle.names(), (std::vector<std::string>{"x1", "x2", "u1"}));
  EXPECT_EQ(c.dual.names(), (std::vector<std::string>{"x1", "x2", "ξ1"}));
  EXPECT_EQ(c.tangent_bundle.total().names(),
            (std::vector<std::string>{"x1", "x2", "u1", "ẋ1", "ẋ2", "u̇1"}));
  EXPECT_EQ(c.cotangent_bundle.names(), (std::vector<std::string>{"x1", "x2", "u1", "p_x1", "p_x2", "ζ1"}));
}
