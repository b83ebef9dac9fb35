#include <gtest/gtest.h>

#include <random>

#include "imcheck/symexpr/parser.hpp"
#include "imcheck/tanlift/identities.hpp"
#include "imcheck/tanlift/tangent.hpp"

using namespace imcheck;
using namespace imcheck::tanlift;
using sym::parse;

namespace {

const Chart kR2 = Chart::parse_list("x1,x2");
const Chart kR3 = Chart::parse_list("x1,x2,x3");

bool same(const KForm& a, const KForm& b) { return cartan::forms_equal(a, b).passed(); }

std::vector<double> image_of(const ChartMap& f, std::vector<double> p) { return f(p); }

}  // namespace

TEST(Naming, DottedNames) {
  EXPECT_EQ(dotted("x1"), "ẋ1");
  EXPECT_EQ(dotted("p_x1"), "ṗ_x1");
  EXPECT_EQ(dotted("u2"), "u̇2");
  EXPECT_EQ(dotted("ξ1"), "ξ̇1");
  TangentChart tm(Chart::parse_list("x,ẋ"));
  EXPECT_EQ(tm.fibre().names(), (std::vector<std::string>{"ẋ_", "ẋ̇"}));
  TangentChart ttm(TangentChart(kR2).total(), FibreNaming::Delta);
  EXPECT_EQ(ttm.fibre().name(2), "δẋ1");
}

TEST(Naming, FormsOnTangentChartsRoundTrip) {
  TangentChart tm(kR2);
  KForm w = parse_form("ẋ1*dẋ2^dx1 - x2*dẋ1^dx2", tm.total());
  EXPECT_EQ(w.degree(), 2);
  EXPECT_EQ(w.component({0, 3}), -tm.velocity(0));
  EXPECT_EQ(parse_form(w.str(), tm.total()), w);
}

TEST(EulerField, ProjectsToTheBasePoint) {
  TangentChart tm(kR3);
  // Tp_M(V) has components ∂p^j/∂y^A V^A; p_M is the coordinate projection.
  const auto& proj = tm.projection();
  VField v = tm.euler_field();
  for (std::size_t j = 0; j < 3; ++j) {
    Expr image;
    for (std::size_t a = 0; a < tm.total().dim(); ++a) image += proj.components()[j].diff(tm.total().name(a)) * v[a];
    EXPECT_EQ(image, tm.velocity(j));
  }
}

TEST(VerticalLift, IsProjectionPullback) {
  TangentChart tm(kR3);
  KForm dx1 = KForm::basis(kR3, 0);
  EXPECT_EQ(vertical_lift(tm, dx1), KForm::basis(tm.total(), 0));
  EXPECT_EQ(vertical_lift(tm, parse_form("dx1^dx2", kR3)), KForm::basis(tm.total(), {0, 1}));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    KForm a = cartan::random_form(kR3, t % 4, rng);
    KForm lifted = vertical_lift(tm, a);
    EXPECT_EQ(lifted, pullback(tm.projection(), a));
    for (const auto& [idx, c] : lifted.components())
      for (std::size_t j = 0; j < 3; ++j) EXPECT_FALSE(c.depends_on(tm.fibre().name(j)));
  }
}

TEST(Tau, Examples) {
  TangentChart tm(kR2);
  EXPECT_EQ(tau(tm, KForm::basis(kR2, 0)), KForm::scalar(tm.total(), tm.velocity(0)));
  // i_V(dx1∧dx2) = V^1 dx2 − V^2 dx1 with V = ẋ^j ∂_j.
  KForm expected(tm.total(), 1);
  expected.add({1}, tm.velocity(0));
  expected.add({0}, -tm.velocity(1));
  KForm t = tau(tm, parse_form("dx1^dx2", kR2));
  EXPECT_EQ(t, expected);
  EXPECT_EQ(t.str(), "ẋ1·dx2 − ẋ2·dx1");
  EXPECT_THROW(tau(tm, KForm::scalar(kR2, parse("x1"))), std::invalid_argument);
}

TEST(TangentLift, Examples) {
  TangentChart tm(kR2);
  EXPECT_EQ(tangent_lift(tm, KForm::scalar(kR2, parse("x1"))), KForm::scalar(tm.total(), tm.velocity(0)));
  for (int j = 0; j < 2; ++j) EXPECT_EQ(tangent_lift(tm, KForm::basis(kR2, j)), KForm::basis(tm.total(), 2 + j));
  // Hand expansion: dτ(ω) = d(ẋ1 dx2 − ẋ2 dx1) and dω = 0.
  KForm expected = parse_form("dẋ1^dx2 + dx1^dẋ2", tm.total());
  EXPECT_EQ(tangent_lift(tm, parse_form("dx1^dx2", kR2)), expected);
  EXPECT_EQ(d(tau(tm, parse_form("dx1^dx2", kR2))), expected);
}

TEST(TangentLift, FunctionLiftIsDirectionalDerivative) {
  TangentChart tm(kR3);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    Expr f = sym::random_polynomial(kR3.names(), rng);
    Expr expected;
    for (std::size_t i = 0; i < 3; ++i) expected += f.diff(kR3.name(i)) * tm.velocity(i);
    EXPECT_EQ(tangent_lift(tm, KForm::scalar(kR3, f)).scalar_value(), expected);
  }
}

TEST(TangentLift, SharpConstructionAgrees) {
  TangentChart tm(kR3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    KForm w = cartan::random_form(kR3, 2, rng);
    EXPECT_TRUE(same(tangent_lift_by_sharp(tm, w), tangent_lift(tm, w)));
  }
}

TEST(CoordinateMaps, CanonicalInvolution) {
  TangentChart tm(Chart::parse_list("x"));
  TangentChart ttm(tm.total(), FibreNaming::Delta);
  ChartMap j = canonical_involution(tm, ttm);
  EXPECT_EQ(image_of(j, {1, 2, 3, 4}), (std::vector<double>{1, 3, 2, 4}));
  TangentChart tm3(kR3);
  TangentChart ttm3(tm3.total(), FibreNaming::Delta);
  ChartMap j3 = canonical_involution(tm3, ttm3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> p(12);
    for (auto& v : p) v = u(rng);
    EXPECT_EQ(image_of(j3, image_of(j3, p)), p);
  }
  EXPECT_EQ(j3.after(j3).components(), ChartMap::identity(ttm3.total()).components());
  EXPECT_THROW(canonical_involution(tm, TangentChart(kR3)), std::invalid_argument);
}

TEST(CoordinateMaps, TangentCotangentFlip) {
  Chart base = Chart::parse_list("x");
  TangentChart tm(base);
  CotangentChart cot(base);
  TangentChart tcot(cot.total());
  CotangentChart cotm(tm.total());
  ChartMap theta = tangent_cotangent_flip(cot, tcot, tm, cotm);
  EXPECT_EQ(tcot.total().names(), (std::vector<std::string>{"x", "p_x", "ẋ", "ṗ_x"}));
  EXPECT_EQ(cotm.total().names(), (std::vector<std::string>{"x", "ẋ", "p_x", "p_ẋ"}));
  EXPECT_EQ(image_of(theta, {1, 2, 3, 4}), (std::vector<double>{1, 3, 4, 2}));
  EXPECT_THROW(tangent_cotangent_flip(cot, tm, tm, cotm), std::invalid_argument);
}

TEST(CoordinateMaps, DualFlip) {
  Chart dual = Chart::parse_list("x1,x2,ξ1");
  TangentChart tdual(dual);
  Chart target = Chart::parse_list("x1,x2,ζ1,y1,y2,η1");
  ChartMap flip = dual_flip(tdual, 2, target);
  // (x, ξ, ẋ, ξ̇) ↦ (x, ξ̇, ẋ, ξ)
  EXPECT_EQ(image_of(flip, {1, 2, 3, 4, 5, 6}), (std::vector<double>{1, 2, 6, 4, 5, 3}));
  EXPECT_THROW(dual_flip(tdual, 2, kR3), std::invalid_argument);
}

TEST(CanonicalForms, SignConvention) {
  CotangentChart cot(kR2);
  EXPECT_EQ(cot.omega_can(), -d(cot.theta_can()));
  EXPECT_EQ(cot.omega_can().str(), "dx1∧dp_x1 + dx2∧dp_x2");
}

TEST(Tau, CoordinateExpansionOnBasis) {
  TangentChart tm(kR3);
  KForm w = KForm::basis(kR3, {0, 1, 2});
  KForm expected = parse_form("ẋ1*dx2^dx3 - ẋ2*dx1^dx3 + ẋ3*dx1^dx2", tm.total());
  EXPECT_EQ(tau_coordinate(tm, w), expected);
  EXPECT_EQ(tau(tm, w), expected);
}

TEST(Identities, TangentSuiteSmall) {
  for (const auto& id : tangent_identities()) {
    auto r = cartan::run_identity(id, 12, 99);
    EXPECT_TRUE(r.passed()) << r.name << ": " << r.first_failure;
  }
}
