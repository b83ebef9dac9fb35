#include "imcheck/kernels/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace imcheck::kernels {

namespace {

void check_shapes(std::span<const sym::CompiledExpr> lhs, std::span<const sym::CompiledExpr> rhs,
                  std::span<const double> samples, std::size_t dim) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("lhs/rhs count mismatch");
  if (dim == 0 ? !samples.empty() : samples.size() % dim != 0)
    throw std::invalid_argument("sample buffer is not a whole number of points");
}

std::size_t point_count(std::span<const double> samples, std::size_t dim) {
  return dim == 0 ? 1 : samples.size() / dim;
}

std::span<const double> point(std::span<const double> samples, std::size_t dim, std::size_t i) {
  return samples.subspan(i * dim, dim);
}

}  // namespace

std::vector<double> sample_box(std::size_t dim, std::size_t count, std::uint64_t seed, Box box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(box.lo, box.hi);
  std::vector<double> out(dim * count);
  for (double& v : out) v = dist(rng);
  return out;
}

double scaled_residual(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)); }

ScanResult scan_pairs_serial(std::span<const sym::CompiledExpr> lhs, std::span<const sym::CompiledExpr> rhs,
                             std::span<const double> samples, std::size_t dim, double tol) {
  check_shapes(lhs, rhs, samples, dim);
  const std::size_t n = point_count(samples, dim);
  ScanResult r;
  for (std::size_t idx = 0; idx < lhs.size() * n; ++idx) {
    const std::size_t k = idx / n;
    auto p = point(samples, dim, idx % n);
    double a = lhs[k](p);
    double b = rhs[k](p);
    if (std::isnan(a) || std::isnan(b)) {
      r.first_domain_error = std::min(r.first_domain_error, idx);
      continue;
    }
    double res = scaled_residual(a, b);
    r.max_residual = std::max(r.max_residual, res);
    if (res > tol) {
      ++r.failures;
      r.first_failure = std::min(r.first_failure, idx);
    }
  }
  return r;
}

ScanResult scan_pairs_parallel(std::span<const sym::CompiledExpr> lhs, std::span<const sym::CompiledExpr> rhs,
                               std::span<const double> samples, std::size_t dim, double tol) {
  check_shapes(lhs, rhs, samples, dim);
  const std::size_t n = point_count(samples, dim);
  const auto total = static_cast<std::int64_t>(lhs.size() * n);
  std::size_t first_failure = npos;
  std::size_t first_domain = npos;
  std::size_t failures = 0;
  double max_residual = 0.0;
#pragma omp parallel for schedule(static) reduction(min : first_failure, first_domain) \
    reduction(+ : failures) reduction(max : max_residual)
  for (std::int64_t i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const std::size_t k = idx / n;
    auto p = point(samples, dim, idx % n);
    double a = lhs[k](p);
    double b = rhs[k](p);
    if (std::isnan(a) || std::isnan(b)) {
      first_domain = std::min(first_domain, idx);
      continue;
    }
    double res = scaled_residual(a, b);
    max_residual = std::max(max_residual, res);
    if (res > tol) {
      ++failures;
      first_failure = std::min(first_failure, idx);
    }
  }
  return {first_failure, first_domain, failures, max_residual};
}

std::vector<double> evaluate_batch_serial(const sym::CompiledExpr& e, std::span<const double> samples,
                                          std::size_t dim) {
  const std::size_t n = point_count(samples, dim);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = e(point(samples, dim, i));
  return out;
}

std::vector<double> evaluate_batch_parallel(const sym::CompiledExpr& e, std::span<const double> samples,
                                            std::size_t dim) {
  const std::size_t n = point_count(samples, dim);
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = e(point(samples, dim, u));
  }
  return out;
}

}  // namespace imcheck::kernels
