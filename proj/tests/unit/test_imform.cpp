#include <gtest/gtest.h>

#include <random>

#include "imcheck/cartan/identities.hpp"
#include "imcheck/imform/imform.hpp"
#include "imcheck/symexpr/parser.hpp"

using namespace imcheck;
using namespace imcheck::imform;
using algebroid::koszul_algebroid;
using algebroid::tangent_bundle_algebroid;
using sym::parse;

namespace {

const Chart kR2 = Chart::parse_list("x1,x2");
const Chart kR3 = Chart::parse_list("x1,x2,x3");

Matrix so3_poisson() {
  return {{0, parse("x3"), parse("-x2")}, {parse("-x3"), 0, parse("x1")}, {parse("x2"), parse("-x1"), 0}};
}

Matrix identity(std::size_t n) {
  Matrix m(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

// σ(u) = i_u β on TM, so σ_jd = β_dj.
Matrix contraction_matrix(const KForm& beta) {
  const std::size_t n = beta.chart().dim();
  Matrix m(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d < n; ++d)
      if (j != d) {
        int lo = static_cast<int>(std::min(j, d)), hi = static_cast<int>(std::max(j, d));
        Expr c = beta.component({lo, hi});
        m[j][d] = d < j ? c : -c;
      }
  return m;
}

IM2FormData tm_beta() {
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  return IM2FormData(tangent_bundle_algebroid(kR3), contraction_matrix(beta), -d(beta));
}

IM2FormData so3_koszul(Matrix sigma = identity(3)) {
  return IM2FormData(koszul_algebroid(kR3, so3_poisson()), std::move(sigma));
}

Section generator(const IM2FormData& data, std::size_t a) { return Section::basis(data.rank(), a); }

}  // namespace

TEST(IM2FormData, Validation) {
  auto tm = tangent_bundle_algebroid(kR2);
  EXPECT_THROW(IM2FormData(tm, identity(3)), std::invalid_argument);
  EXPECT_THROW(IM2FormData(tm, Matrix{{parse("y"), 0}, {0, 1}}), std::invalid_argument);
  auto tm3 = tangent_bundle_algebroid(kR3);
  EXPECT_THROW(IM2FormData(tm3, identity(3), cartan::parse_form("x1*dx1^dx2", kR3)), std::invalid_argument);
  EXPECT_NO_THROW(IM2FormData(tm3, identity(3), cartan::parse_form("x1^2*dx1^dx2^dx3", kR3)));
}

TEST(IM2FormData, SigmaOfAndMaps) {
  auto data = tm_beta();
  EXPECT_EQ(data.sigma_of(generator(data, 0)).str(), "x2·dx3");
  EXPECT_EQ(data.sigma_of(generator(data, 2)).str(), "−x2·dx1");
  EXPECT_EQ(data.sigma_map().components()[3], parse("-x2*u3"));
  EXPECT_EQ(data.sigma_map().components()[5], parse("x2*u1"));
  EXPECT_EQ(data.anchor_map().components()[4], parse("u2"));
}

TEST(IMConditions, TwistedTangentPasses) {
  auto report = check_im(tm_beta());
  EXPECT_TRUE(report.im1.outcome.passed());
  EXPECT_TRUE(report.im2.outcome.passed());
}

TEST(IMConditions, UntwistedBetaFailsOnlyIM2) {
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  IM2FormData data(tangent_bundle_algebroid(kR3), contraction_matrix(beta));
  auto report = check_im(data);
  EXPECT_TRUE(report.im1.outcome.passed());
  EXPECT_EQ(report.im2.outcome.verdict, sym::Verdict::Fail);
}

TEST(IMConditions, KoszulIdentityPasses) { EXPECT_TRUE(check_im(so3_koszul()).passed()); }

TEST(IMConditions, RowScaledFailsIM1WithWitness) {
  Matrix sigma = identity(3);
  sigma[0][0] = Expr(2);
  auto report = check_im(so3_koszul(sigma));
  EXPECT_EQ(report.im1.outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(report.im1.outcome.witness.has_value());
  EXPECT_NE(report.im1.outcome.witness->label.find("(1,2)"), std::string::npos);
}

TEST(IMConditions, PairingOracle) {
  // ⟨σ u, ρ v⟩ + ⟨σ v, ρ u⟩ written out for the Koszul algebroid with σ = id: π^{ba} + π^{ab}
  Matrix sigma = identity(3);
  sigma[1][1] = parse("x1");
  auto data = so3_koszul(sigma);
  auto pi = so3_poisson();
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      Expr expected;
      for (std::size_t j = 0; j < 3; ++j) expected += sigma[j][a] * pi[b][j] + sigma[j][b] * pi[a][j];
      EXPECT_EQ(im1_pairing(data, generator(data, a), generator(data, b)), expected);
    }
}

TEST(IMConditions, DefectIsFunctionLinear) {
  // D(fu, v) = f D(u, v) − IM1(u, v) df and D(u, fv) = f D(u, v)
  Matrix sigma = identity(2);
  sigma[0][0] = parse("1 + x2");
  sigma[0][1] = parse("x1*x2");
  IM2FormData data(tangent_bundle_algebroid(kR2), sigma);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Expr f = cartan::random_form(kR2, 0, rng).component({});
    Section u{{cartan::random_form(kR2, 0, rng).component({}), cartan::random_form(kR2, 0, rng).component({})}};
    Section v{{cartan::random_form(kR2, 0, rng).component({}), cartan::random_form(kR2, 0, rng).component({})}};
    KForm base = im2_defect(data, u, v);
    KForm left = im2_defect(data, f * u, v);
    KForm expected = f * base - im1_pairing(data, u, v) * d(KForm::scalar(kR2, f));
    EXPECT_TRUE(cartan::forms_equal(left, expected).passed()) << trial;
    EXPECT_TRUE(cartan::forms_equal(im2_defect(data, u, f * v), f * base).passed()) << trial;
  }
}

TEST(BuildLambda, IdentityOnTangentBundle) {
  IM2FormData data(tangent_bundle_algebroid(kR2), identity(2));
  auto lambda = build_lambda(data);
  ASSERT_TRUE(lambda.linear) << lambda.shape_note;
  const Chart& a = data.charts().bundle;
  KForm expected = -(KForm::basis(a, {0, 2}) + KForm::basis(a, {1, 3}));
  EXPECT_TRUE(cartan::forms_equal(lambda.form, expected).passed()) << lambda.form.str();
  EXPECT_EQ(lambda.lambda[0][0], Expr(-1));
  EXPECT_EQ(lambda.lambda[0][1], Expr(0));
}

TEST(BuildLambda, ZeroSigmaIsTwistOnly) {
  // σ = 0: Λ = −ρ^*τ(φ) = −½ φ_ijk ρ^k_d u^d dx^i∧dx^j
  IM2FormData data(tangent_bundle_algebroid(kR3), Matrix(3, std::vector<Expr>(3)),
                   cartan::parse_form("dx1^dx2^dx3", kR3));
  auto lambda = build_lambda(data);
  ASSERT_TRUE(lambda.linear);
  KForm expected = cartan::parse_form("-u3*dx1^dx2 - u1*dx2^dx3 + u2*dx1^dx3", data.charts().bundle);
  EXPECT_TRUE(cartan::forms_equal(lambda.form, expected).passed()) << lambda.form.str();
  EXPECT_EQ(lambda.horizontal[0][1][2], Expr(-1));
  EXPECT_EQ(lambda.horizontal[1][0][2], Expr(1));
}

TEST(BuildLambda, CoveringMapIsMinusSigmaTranspose) {
  for (const auto& data : {tm_beta(), so3_koszul()}) {
    auto lambda = build_lambda(data);
    ASSERT_TRUE(lambda.linear);
    for (std::size_t j = 0; j < data.dim(); ++j)
      for (std::size_t e = 0; e < data.rank(); ++e) EXPECT_EQ(lambda.lambda[j][e], -data.sigma()[j][e]);
  }
}

TEST(LambdaSharp, IdentitySigma) {
  IM2FormData data(tangent_bundle_algebroid(kR2), identity(2));
  const auto c = lambda_sharp(data).components();
  ASSERT_EQ(c.size(), 8u);
  EXPECT_EQ(c[4], parse("u̇1"));
  EXPECT_EQ(c[5], parse("u̇2"));
  EXPECT_EQ(c[6], parse("-ẋ1"));
  EXPECT_EQ(c[7], parse("-ẋ2"));
}

TEST(LambdaSharp, AgreesWithContraction) {
  Matrix sigma = identity(3);
  sigma[2][0] = parse("x2^2");
  std::vector<IM2FormData> cases{tm_beta(), so3_koszul(), so3_koszul(sigma),
                                 IM2FormData(tangent_bundle_algebroid(kR3), sigma, cartan::parse_form("x1*dx1^dx2^dx3", kR3))};
  for (const auto& data : cases) {
    auto lambda = build_lambda(data);
    auto cmp = map_comparisons("sharp", lambda_sharp(data), contraction_sharp(lambda.form, data.charts()));
    auto outcome = sym::compare_all(cmp);
    EXPECT_TRUE(outcome.passed()) << (outcome.witness ? outcome.witness->label : outcome.note);
  }
}

TEST(LambdaSharp, FrameImages) {
  auto data = so3_koszul();
  // ê_b ↦ σ_jb d̂x^j
  auto hat = frame_image(data, 3 + 1);
  ASSERT_EQ(hat.size(), 6u);
  EXPECT_EQ(hat[0], Expr(0));
  EXPECT_EQ(hat[4], Expr(1));
  EXPECT_EQ(hat[3], Expr(0));
  // Te_a ↦ e_a^L + f^a_j d̂x^j
  auto te = frame_image(data, 0);
  EXPECT_EQ(te[0], Expr(1));
  EXPECT_EQ(te[1], Expr(0));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(te[3 + j], Expr(0));
}

TEST(Morphism, PositivesPassEveryCase) {
  for (const auto& data : {tm_beta(), so3_koszul()}) {
    auto report = check_morphism(data);
    ASSERT_EQ(report.cases.size(), 6u);
    for (const auto& c : report.cases) EXPECT_TRUE(c.outcome.passed()) << c.name;
    EXPECT_TRUE(report.im.passed());
    EXPECT_TRUE(report.passed());
  }
}

TEST(Morphism, CaseNamesInOrder) {
  auto report = check_morphism(so3_koszul());
  std::vector<std::string> names;
  for (const auto& c : report.cases) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"covering", "anchor-core", "anchor-linear", "core-core", "core-linear",
                                             "linear-linear"}));
  EXPECT_THROW(report.find("nope"), std::out_of_range);
}

TEST(Morphism, IM1OnlyMutationHitsAnchorCore) {
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  Matrix sigma = contraction_matrix(beta);
  sigma[0][0] += Expr(1);
  IM2FormData data(tangent_bundle_algebroid(kR3), sigma, -d(beta));
  auto report = check_morphism(data);
  EXPECT_EQ(report.im.im1.outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(report.im.im2.outcome.passed());
  EXPECT_EQ(report.find("anchor-core").outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(report.find("covering").outcome.passed());
  EXPECT_TRUE(report.find("anchor-linear").outcome.passed());
  EXPECT_FALSE(report.passed());
}

TEST(Morphism, IM2OnlyMutationHitsLinearCases) {
  KForm beta = cartan::parse_form("x2*dx1^dx3", kR3);
  IM2FormData data(tangent_bundle_algebroid(kR3), contraction_matrix(beta));
  auto report = check_morphism(data);
  EXPECT_TRUE(report.im.im1.outcome.passed());
  EXPECT_EQ(report.im.im2.outcome.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(report.find("anchor-core").outcome.passed());
  EXPECT_TRUE(report.find("core-core").outcome.passed());
  EXPECT_EQ(report.find("anchor-linear").outcome.verdict, sym::Verdict::Fail);
  EXPECT_EQ(report.find("core-linear").outcome.verdict, sym::Verdict::Fail);
  EXPECT_FALSE(report.passed());
}

TEST(Morphism, EquivalentToIMOnRandomSigma) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-1, 1);
  const std::vector<std::string> monomials{"1", "x1", "x2", "x1*x2"};
  std::size_t passes = 0;
  for (int trial = 0; trial < 12; ++trial) {
    Matrix sigma(2, std::vector<Expr>(2));
    for (auto& row : sigma)
      for (auto& e : row)
        for (const auto& m : monomials)
          if (int c = coeff(rng); c != 0) e += Expr(c) * parse(m);
    // every third trial uses a β-contraction, which satisfies IM
    if (trial % 3 == 0) {
      Expr f = sigma[0][1];
      sigma = {{0, -f}, {f, 0}};
    }
    IM2FormData data(tangent_bundle_algebroid(kR2), sigma);
    auto report = check_morphism(data);
    EXPECT_EQ(report.passed(), report.im.passed()) << trial;
    passes += report.passed();
  }
  EXPECT_GE(passes, 4u);
}

TEST(LinearAnalysis, SigmaPullbackIsClosedAndReconstructs) {
  auto data = so3_koszul();
  tanlift::CotangentChart cot(kR3);
  KForm form = pullback(data.sigma_map(), cot.omega_can());
  auto analysis = analyze_linear(form, data.charts());
  EXPECT_TRUE(analysis.linear());
  EXPECT_TRUE(analysis.closed.passed());
  EXPECT_TRUE(analysis.reconstructs.passed());
  EXPECT_TRUE(analysis.biconditional_holds());
}

TEST(LinearAnalysis, LinearButNotClosed) {
  algebroid::BundleCharts charts(kR2, 1);
  KForm form = cartan::parse_form("u1*dx1^dx2", charts.bundle);
  auto analysis = analyze_linear(form, charts);
  EXPECT_TRUE(analysis.linear());
  EXPECT_EQ(analysis.closed.verdict, sym::Verdict::Fail);
  EXPECT_EQ(analysis.reconstructs.verdict, sym::Verdict::Fail);
  EXPECT_TRUE(analysis.biconditional_holds());
}

TEST(LinearAnalysis, NonLinearShapes) {
  algebroid::BundleCharts charts(kR2, 2);
  for (const char* text : {"u1^2*dx1^dx2", "dx1^dx2", "u1*dx1^du2", "du1^du2"}) {
    auto analysis = analyze_linear(cartan::parse_form(text, charts.bundle), charts);
    EXPECT_FALSE(analysis.linear()) << text;
    EXPECT_FALSE(analysis.form.shape_note.empty()) << text;
  }
}
