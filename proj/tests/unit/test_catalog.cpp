#include <gtest/gtest.h>

#include <random>

#include "imcheck/catalog/catalog.hpp"
#include "imcheck/cartan/identities.hpp"
#include "imcheck/symexpr/parser.hpp"

using namespace imcheck;
using namespace imcheck::catalog;

namespace {

const Chart kR2 = Chart::parse_list("x1,x2");
const Chart kR3 = Chart::parse_list("x1,x2,x3");

std::vector<std::string> failing(const imform::MorphismReport& report) {
  std::vector<std::string> out;
  for (const auto& c : report.cases)
    if (!c.outcome.passed()) out.push_back(c.name);
  return out;
}

}  // namespace

TEST(Algebroids, ValidityMatchesAxioms) {
  for (const auto& ex : builtin_algebroids()) {
    auto report = algebroid::check_axioms(ex.algebroid);
    EXPECT_EQ(report.passed(), ex.valid) << ex.name;
  }
}

TEST(Algebroids, KoszulEntryRelations) {
  // [dx1, dx2] = dx3 and ρ^j_a = ε_ajk x_k
  const auto al = builtin_algebroids()[4].algebroid;
  ASSERT_EQ(al.rank(), 3u);
  auto br = al.bracket(algebroid::Section::basis(3, 0), algebroid::Section::basis(3, 1));
  EXPECT_EQ(br, algebroid::Section::basis(3, 2));
  EXPECT_EQ(al.anchor(1, 0), sym::parse("x3"));
  EXPECT_EQ(al.anchor(2, 0), sym::parse("-x2"));
}

TEST(Examples, PositivesPassEverything) {
  std::size_t positives = 0;
  for (const auto& ex : builtin_examples()) {
    if (!ex.positive()) continue;
    ++positives;
    EXPECT_TRUE(algebroid::check_axioms(ex.data.algebroid()).passed()) << ex.name;
    EXPECT_TRUE(imform::check_im(ex.data).passed()) << ex.name;
    EXPECT_TRUE(imform::check_morphism(ex.data).passed()) << ex.name;
  }
  EXPECT_GE(positives, 3u);
}

TEST(Examples, MutationsFailExactlyTheirCases) {
  std::size_t mutations = 0;
  for (const auto& ex : builtin_examples()) {
    if (ex.positive()) continue;
    ++mutations;
    auto report = imform::check_morphism(ex.data);
    EXPECT_EQ(failing(report), ex.failing_cases) << ex.name;
    std::vector<std::string> broken;
    if (!report.im.im1.outcome.passed()) broken.push_back("IM1");
    if (!report.im.im2.outcome.passed()) broken.push_back("IM2");
    EXPECT_EQ(broken, ex.broken_conditions) << ex.name;
    EXPECT_EQ(report.passed(), report.im.passed()) << ex.name;
    EXPECT_TRUE(report.find("core-core").outcome.passed()) << ex.name;
  }
  EXPECT_GE(mutations, 6u);
}

TEST(Examples, PointAlgebraIsVacuous) {
  auto ex = find_example("so3_point");
  EXPECT_EQ(ex.data.dim(), 0u);
  EXPECT_TRUE(imform::check_im(ex.data).passed());
  EXPECT_THROW(find_example("nope"), std::out_of_range);
}

TEST(Examples, ContractionMatrix) {
  auto m = contraction_matrix(cartan::parse_form("x2*dx1^dx3", kR3));
  EXPECT_EQ(m[2][0], sym::parse("x2"));
  EXPECT_EQ(m[0][2], sym::parse("-x2"));
  EXPECT_EQ(m[1][1], Expr(0));
}

TEST(Dirac, BuiltinVerdicts) {
  for (const auto& ex : builtin_dirac()) {
    auto report = check_dirac(ex.frame);
    EXPECT_EQ(report.accepted, ex.accepted) << ex.name << " " << report.rejection;
    if (ex.accepted) {
      EXPECT_LT(report.max_involutivity, 1e-8) << ex.name;
      EXPECT_TRUE(report.im_passed) << ex.name;
      EXPECT_EQ(report.min_rank, ex.frame.base.dim());
    }
  }
}

TEST(Dirac, RejectionsNameTheirCause) {
  auto all = builtin_dirac();
  auto untwisted = check_dirac(all[2].frame);
  EXPECT_EQ(untwisted.rejection, "involutivity");
  ASSERT_TRUE(untwisted.pair.has_value());
  EXPECT_EQ(untwisted.point.size(), 3u);
  auto iso = check_dirac(all[3].frame);
  EXPECT_EQ(iso.rejection, "isotropy");
  ASSERT_TRUE(iso.pair.has_value());
  EXPECT_EQ(*iso.pair, (std::pair<std::size_t, std::size_t>{1, 1}));
}

TEST(Dirac, GraphSigmaAndSymbolicIM) {
  KForm omega = cartan::parse_form("dx1^dx2 + x3*dx1^dx3 + x2*dx2^dx3", kR3);
  auto data = dirac_to_im(DiracFrame::graph(omega, KForm(kR3, 3)));
  EXPECT_EQ(data.sigma(), contraction_matrix(omega));
  EXPECT_TRUE(imform::check_im(data).passed());
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  EXPECT_TRUE(imform::check_im(dirac_to_im(DiracFrame::graph(beta, -d(beta)))).passed());
}

TEST(Dirac, FrameChangeInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (const auto& ex : builtin_dirac()) {
    const std::size_t n = ex.frame.base.dim();
    std::vector<std::vector<int>> m;
    // unit lower triangular times unit upper triangular is invertible
    std::vector<std::vector<int>> lower(n, std::vector<int>(n)), upper(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        lower[i][j] = i == j ? 1 : (j < i ? entry(rng) : 0);
        upper[i][j] = i == j ? 1 : (j > i ? entry(rng) : 0);
      }
    m.assign(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) m[i][j] += lower[i][k] * upper[k][j];
    EXPECT_EQ(check_dirac(ex.frame.transformed(m)).accepted, ex.accepted) << ex.name;
  }
}

TEST(PairGroupoid, Charts) {
  PairGroupoid g(kR2);
  EXPECT_EQ(g.arrows().names(), (std::vector<std::string>{"x1_1", "x2_1", "x1_2", "x2_2"}));
  EXPECT_EQ(g.source().components()[0], sym::parse("x1_2"));
  EXPECT_EQ(g.target().components()[1], sym::parse("x2_1"));
  EXPECT_EQ(g.multiplication().components()[2], sym::parse("x1_3"));
  auto inc = g.algebroid_inclusion().components();
  EXPECT_EQ(inc[2], sym::parse("x1"));
  EXPECT_EQ(inc[4], sym::parse("u1"));
  EXPECT_EQ(inc[6], Expr(0));
}

TEST(PairGroupoid, PlaneBeta) {
  PairGroupoid g(kR2);
  KForm beta = cartan::parse_form("x1*dx1^dx2", kR2);
  auto report = pair_groupoid_check(g, g.telescoped(beta));
  EXPECT_TRUE(report.structure_maps.outcome.passed());
  EXPECT_TRUE(report.multiplicative.outcome.passed());
  EXPECT_EQ(report.sigma, contraction_matrix(beta));
  EXPECT_TRUE(report.phi.is_zero());
  EXPECT_TRUE(report.relation.outcome.passed());
  EXPECT_TRUE(report.passed());
}

TEST(PairGroupoid, TwistedBetaMatchesCatalog) {
  PairGroupoid g(kR3);
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  auto report = pair_groupoid_check(g, g.telescoped(beta));
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(cartan::forms_equal(report.phi, cartan::parse_form("dx1^dx2^dx3", kR3)).passed()) << report.phi.str();
  auto ex = find_example("tm_beta");
  EXPECT_EQ(report.sigma, ex.data.sigma());
  EXPECT_TRUE(cartan::forms_equal(report.phi, ex.data.phi()).passed());
}

TEST(PairGroupoid, SignMutationFailsWithWitness) {
  PairGroupoid g(kR2);
  KForm beta = cartan::parse_form("x1*dx1^dx2", kR2);
  KForm omega = pullback(g.target(), beta) + pullback(g.source(), beta);
  auto report = pair_groupoid_check(g, omega);
  EXPECT_EQ(report.multiplicative.outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(report.multiplicative.outcome.witness.has_value());
  EXPECT_FALSE(report.passed());
}

TEST(PairGroupoid, TelescopedIsAlwaysMultiplicative) {
  std::mt19937_64 rng(5);
  for (const auto& base : {kR2, kR3}) {
    PairGroupoid g(base);
    for (int trial = 0; trial < 4; ++trial) {
      KForm beta = cartan::random_form(base, 2, rng);
      auto report = pair_groupoid_check(g, g.telescoped(beta));
      EXPECT_TRUE(report.multiplicative.outcome.passed());
      EXPECT_TRUE(report.relation.outcome.passed()) << beta.str();
      EXPECT_TRUE(cartan::forms_equal(report.phi, -d(beta)).passed());
    }
  }
}
