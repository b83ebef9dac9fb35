#include <gtest/gtest.h>

#include <random>

#include "imcheck/cartan/forms.hpp"
#include "imcheck/cartan/identities.hpp"
#include "imcheck/symexpr/parser.hpp"

using namespace imcheck;
using namespace imcheck::cartan;
using sym::parse;

namespace {

const Chart kR3 = Chart::parse_list("x1,x2,x3");

KForm F(std::string_view s, const Chart& c = kR3) { return parse_form(s, c); }

bool same(const KForm& a, const KForm& b) { return forms_equal(a, b).passed(); }

// Sign of the permutation sorting `p` (distinct entries), by counting inversions.
int inversion_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

TEST(Chart, RejectsDuplicates) {
  EXPECT_THROW(Chart::parse_list("x1,x1"), std::invalid_argument);
  EXPECT_EQ(Chart::parse_list(" a , b ").names(), (std::vector<std::string>{"a", "b"}));
}

TEST(Wedge, BasisCase) {
  KForm w = wedge(KForm::basis(kR3, 0), KForm::basis(kR3, 1));
  ASSERT_EQ(w.components().size(), 1u);
  EXPECT_EQ(w.components().begin()->first, (Indices{0, 1}));
  EXPECT_EQ(w.components().begin()->second, sym::Expr(1));
  EXPECT_TRUE(wedge(KForm::basis(kR3, 0), KForm::basis(kR3, 0)).is_zero());
}

TEST(Wedge, GradedCommutativity) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    int ka = std::uniform_int_distribution<int>(0, 3)(rng);
    int kb = std::uniform_int_distribution<int>(0, 3 - ka)(rng);
    KForm a = random_form(kR3, ka, rng);
    KForm b = random_form(kR3, kb, rng);
    int sign = (ka * kb) % 2 == 0 ? 1 : -1;
    EXPECT_EQ(wedge(a, b), sym::Expr(sign) * wedge(b, a));
  }
}

TEST(Wedge, OverflowIsZero) {
  KForm w = wedge(F("dx1^dx2"), F("dx2^dx3"));
  EXPECT_TRUE(w.is_zero());
  EXPECT_EQ(w.degree(), 4);
}

TEST(ExteriorDerivative, Examples) {
  EXPECT_EQ(d(F("x1*dx2")), F("dx1^dx2"));
  // dx2∧dx1∧dx3 reordered: the sign is that of the permutation (2,1,3).
  KForm expected(kR3, 3);
  expected.add({0, 1, 2}, sym::Expr(inversion_sign({2, 1, 3})));
  EXPECT_EQ(d(F("x2*dx1^dx3")), expected);
  EXPECT_EQ(d(F("x2*dx1^dx3")), F("-dx1^dx2^dx3"));
}

TEST(ExteriorDerivative, SquareIsZero) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    KForm f = KForm::scalar(kR3, sym::random_polynomial(kR3.names(), rng));
    EXPECT_TRUE(d(d(f)).is_zero());
  }
}

TEST(Interior, Examples) {
  EXPECT_EQ(interior(VField::coordinate(kR3, 0), F("dx1^dx2")), F("dx2"));
  VField x(kR3, {parse("x2"), 0, 0});
  EXPECT_EQ(interior(x, F("dx1^dx2^dx3")), F("x2*dx2^dx3"));
  EXPECT_THROW(interior(x, F("x1")), std::invalid_argument);
}

TEST(Interior, MatchesMultilinearEvaluation) {
  // Oracle: (i_X a)(e_j, e_k) = a(X, e_j, e_k) = Σ_i X^i a_{ijk}, using
  // antisymmetric components.
  std::mt19937_64 rng(3);
  Chart c = numbered_chart("x", 4);
  for (int t = 0; t < 20; ++t) {
    KForm a = random_form(c, 3, rng);
    VField x = random_field(c, rng);
    KForm ia = interior(x, a);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        sym::Expr s;
        for (int i = 0; i < 4; ++i) s += x[static_cast<std::size_t>(i)] * a.component({i, j, k});
        EXPECT_EQ(ia.component({j, k}), s);
      }
  }
}

TEST(Interior, Nilpotent) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    KForm a = random_form(kR3, 2, rng);
    VField x = random_field(kR3, rng);
    EXPECT_TRUE(interior(x, interior(x, a)).is_zero());
  }
}

TEST(LieDerivative, Examples) {
  EXPECT_EQ(lie_derivative(VField::coordinate(kR3, 0), F("x1*dx2")), F("dx2"));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    KForm f = KForm::scalar(kR3, sym::random_polynomial(kR3.names(), rng));
    VField x = random_field(kR3, rng);
    EXPECT_EQ(lie_derivative(x, f), interior(x, d(f)));
  }
}

TEST(LieDerivative, MatchesCoordinateFormula) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    int k = std::uniform_int_distribution<int>(0, 3)(rng);
    KForm a = random_form(kR3, k, rng);
    VField x = random_field(kR3, rng);
    EXPECT_TRUE(same(lie_derivative(x, a), lie_derivative_coordinate(x, a)));
  }
}

TEST(Pullback, IdentityAndRingMorphism) {
  std::mt19937_64 rng(7);
  auto id = ChartMap::identity(kR3);
  Chart src = Chart::parse_list("y1,y2");
  for (int t = 0; t < 20; ++t) {
    KForm a = random_form(kR3, 2, rng);
    EXPECT_EQ(pullback(id, a), a);
    ChartMap f = random_map(src, kR3, rng);
    KForm g = KForm::scalar(kR3, sym::random_polynomial(kR3.names(), rng));
    KForm h = KForm::scalar(kR3, sym::random_polynomial(kR3.names(), rng));
    EXPECT_EQ(pullback(f, wedge(g, h)), wedge(pullback(f, g), pullback(f, h)));
  }
}

TEST(Pullback, Functorial) {
  std::mt19937_64 rng(8);
  Chart a = Chart::parse_list("y1,y2");
  Chart b = Chart::parse_list("z1,z2,z3");
  for (int t = 0; t < 10; ++t) {
    ChartMap f = random_map(a, b, rng, {2, 2, 2});
    ChartMap g = random_map(b, kR3, rng, {2, 2, 2});
    KForm w = random_form(kR3, 2, rng, {2, 1, 3});
    EXPECT_TRUE(same(pullback(g.after(f), w), pullback(f, pullback(g, w))));
  }
}

TEST(Pullback, CanonicalFormAlongLinearMap) {
  // σ(x,u) = (x, p_j = u^d σ_jd(x)); σ^*(dx^i ∧ dp_i) expands to
  // u^d ∂_k σ_id dx^i∧dx^k + σ_id dx^i∧du^d.
  std::mt19937_64 rng(9);
  const std::size_t n = 3, r = 2;
  Chart cot = Chart::parse_list("x1,x2,x3,p_x1,p_x2,p_x3");
  Chart bundle = Chart::parse_list("x1,x2,x3,u1,u2");
  KForm omega(cot, 2);
  for (int i = 0; i < 3; ++i) omega.add({i, i + 3}, sym::Expr(1));
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<sym::Expr>> sigma(n, std::vector<sym::Expr>(r));
    for (auto& row : sigma)
      for (auto& e : row) e = sym::random_polynomial({"x1", "x2", "x3"}, rng, {2, 2, 3});
    std::vector<sym::Expr> comps{parse("x1"), parse("x2"), parse("x3")};
    for (std::size_t j = 0; j < n; ++j) {
      sym::Expr p;
      for (std::size_t dd = 0; dd < r; ++dd) p += bundle.coordinate(n + dd) * sigma[j][dd];
      comps.push_back(p);
    }
    ChartMap s(bundle, cot, comps);
    KForm expected(bundle, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t dd = 0; dd < r; ++dd) {
        for (std::size_t k = 0; k < n; ++k)
          expected.add({static_cast<int>(i), static_cast<int>(k)},
                       bundle.coordinate(n + dd) * sigma[i][dd].diff(bundle.name(k)));
        expected.add({static_cast<int>(i), static_cast<int>(n + dd)}, sigma[i][dd]);
      }
    EXPECT_TRUE(same(pullback(s, omega), expected));
  }
}

TEST(FieldBracket, Examples) {
  auto e1 = VField::coordinate(kR3, 0);
  auto e2 = VField::coordinate(kR3, 1);
  EXPECT_EQ(field_bracket(e1, e2), VField(kR3));
  EXPECT_EQ(field_bracket(e1, parse("x1") * e2), e2);
  VField x(kR3, {0, parse("-x3"), parse("x2")});
  VField y(kR3, {parse("x3"), 0, parse("-x1")});
  EXPECT_EQ(field_bracket(x, y), VField(kR3, {parse("x2"), parse("-x1"), 0}));
}

TEST(FieldBracket, AntisymmetryAndJacobi) {
  std::mt19937_64 rng(10);
  sym::CheckOptions numeric;
  numeric.mode = sym::Mode::Numeric;
  for (int t = 0; t < 10; ++t) {
    VField x = random_field(kR3, rng), y = random_field(kR3, rng), z = random_field(kR3, rng);
    EXPECT_EQ(field_bracket(x, y), sym::Expr(-1) * field_bracket(y, x));
    VField jac = field_bracket(x, field_bracket(y, z)) + field_bracket(y, field_bracket(z, x)) +
                 field_bracket(z, field_bracket(x, y));
    for (const auto& c : jac.components()) EXPECT_TRUE(sym::expr_equal(c, 0, numeric).passed());
  }
}

TEST(FormSyntax, ParseAndPrint) {
  KForm w = F("x2*dx1^dx3 - dx2∧dx3 + 3·x1·dx1∧dx2");
  EXPECT_EQ(w.degree(), 2);
  EXPECT_EQ(w.component({2, 0}), parse("-x2"));
  EXPECT_EQ(w.str(), "3·x1·dx1∧dx2 + x2·dx1∧dx3 − dx2∧dx3");
  EXPECT_EQ(F(w.str()), w);
  EXPECT_EQ(F("0").str(), "0");
  EXPECT_EQ(F("(x1+x2)*dx1").str(), "x1·dx1 + x2·dx1");
}

TEST(FormSyntax, Errors) {
  EXPECT_THROW(F("dx1 + x1"), sym::ParseError);
  EXPECT_THROW(F("dy1"), sym::ParseError);
  EXPECT_THROW(F("sin(dx1)"), sym::ParseError);
  EXPECT_THROW(F("x1/dx2"), sym::ParseError);
}

TEST(FormSyntax, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    KForm a = random_form(kR3, std::uniform_int_distribution<int>(0, 3)(rng), rng);
    EXPECT_EQ(F(a.str()), a) << a.str();
  }
}

TEST(Identities, ExteriorSuiteSmall) {
  for (const auto& id : exterior_identities()) {
    auto r = run_identity(id, 15, 123);
    EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_failure;
    EXPECT_EQ(r.trials, 15u);
  }
}
