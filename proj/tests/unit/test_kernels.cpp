#include <gtest/gtest.h>

#include <cmath>

#include "imcheck/kernels/sampling.hpp"
#include "imcheck/symexpr/compiled.hpp"
#include "imcheck/symexpr/expr.hpp"
#include "imcheck/symexpr/random.hpp"

using namespace imcheck;

TEST(Sampling, DeterministicAndInsideBox) {
  auto a = kernels::sample_box(3, 100, 42, {-1.0, 0.5});
  auto b = kernels::sample_box(3, 100, 42, {-1.0, 0.5});
  EXPECT_EQ(a, b);
  for (double v : a) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 0.5);
  }
  EXPECT_NE(a, kernels::sample_box(3, 100, 43, {-1.0, 0.5}));
}

TEST(Compiled, MatchesTreeEvaluation) {
  std::vector<std::string> vars{"x1", "x2", "x3"};
  std::mt19937_64 rng(1);
  auto samples = kernels::sample_box(vars.size(), 50, 2);
  for (int i = 0; i < 50; ++i) {
    sym::Expr e = sym::random_polynomial(vars, rng) * sym::Expr::call(sym::Function::Cos, sym::parse("x1 - x3")) +
                  sym::parse("(x2^2 + 1)^(-1/2)");
    sym::CompiledExpr c(e, vars);
    for (std::size_t s = 0; s < 50; ++s) {
      std::span<const double> p(samples.data() + s * 3, 3);
      double tree = e.evaluate({{"x1", p[0]}, {"x2", p[1]}, {"x3", p[2]}});
      EXPECT_NEAR(c(p), tree, 1e-12 * (1 + std::abs(tree)));
    }
  }
}

TEST(Compiled, DomainErrorsBecomeNaN) {
  std::vector<std::string> vars{"x1"};
  double neg[] = {-1.0};
  double zero[] = {0.0};
  EXPECT_TRUE(std::isnan(sym::CompiledExpr(sym::parse("log(x1)"), vars)(neg)));
  EXPECT_TRUE(std::isnan(sym::CompiledExpr(sym::parse("1/x1"), vars)(zero)));
  EXPECT_THROW(sym::CompiledExpr(sym::parse("x2"), vars), std::invalid_argument);
}

TEST(Scan, SerialAndParallelAgree) {
  std::vector<std::string> vars{"x1", "x2"};
  std::vector<sym::CompiledExpr> lhs, rhs;
  lhs.emplace_back(sym::parse("x1*x2"), vars);
  rhs.emplace_back(sym::parse("x2*x1"), vars);
  lhs.emplace_back(sym::parse("log(x1)"), vars);
  rhs.emplace_back(sym::parse("log(x1)"), vars);
  lhs.emplace_back(sym::parse("x1^2"), vars);
  rhs.emplace_back(sym::parse("x1"), vars);
  auto samples = kernels::sample_box(2, 1000, 5);
  auto s = kernels::scan_pairs_serial(lhs, rhs, samples, 2, 1e-9);
  auto p = kernels::scan_pairs_parallel(lhs, rhs, samples, 2, 1e-9);
  EXPECT_EQ(s, p);
  EXPECT_EQ(s.first_failure / 1000, 2u);
  EXPECT_EQ(s.first_domain_error / 1000, 1u);
  EXPECT_GT(s.failures, 900u);
}

TEST(Batch, SerialAndParallelAgree) {
  std::vector<std::string> vars{"x1", "x2", "x3"};
  sym::CompiledExpr c(sym::parse("sin(x1)*x2 - exp(x3)/3"), vars);
  auto samples = kernels::sample_box(3, 2000, 8);
  EXPECT_EQ(kernels::evaluate_batch_serial(c, samples, 3), kernels::evaluate_batch_parallel(c, samples, 3));
}
