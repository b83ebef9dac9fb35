#pragma once

// Numeric sampling kernels shared by every residual check.
//
// Each kernel has a serial reference version and an OpenMP version. Both must
// return identical results for identical inputs; the tests compare them and
// bench/ measures the speedup.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "imcheck/symexpr/compiled.hpp"

namespace imcheck::kernels {

struct Box {
  double lo = -2.0;
  double hi = 2.0;
};

/// `count` uniformly distributed points in box^dim, row-major.
std::vector<double> sample_box(std::size_t dim, std::size_t count, std::uint64_t seed, Box box = {});

/// Scaled residual |a-b| / (1 + |a| + |b|).
double scaled_residual(double a, double b);

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Outcome of comparing lhs[k] against rhs[k] at every sample. Indices are
/// flattened as k * sample_count + sample, so the smallest index is the first
/// failing comparison in declaration order.
struct ScanResult {
  std::size_t first_failure = npos;
  std::size_t first_domain_error = npos;
  std::size_t failures = 0;
  double max_residual = 0.0;

  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

ScanResult scan_pairs_serial(std::span<const sym::CompiledExpr> lhs, std::span<const sym::CompiledExpr> rhs,
                             std::span<const double> samples, std::size_t dim, double tol);
ScanResult scan_pairs_parallel(std::span<const sym::CompiledExpr> lhs, std::span<const sym::CompiledExpr> rhs,
                               std::span<const double> samples, std::size_t dim, double tol);

std::vector<double> evaluate_batch_serial(const sym::CompiledExpr& e, std::span<const double> samples,
                                          std::size_t dim);
std::vector<double> evaluate_batch_parallel(const sym::CompiledExpr& e, std::span<const double> samples,
                                            std::size_t dim);

}  // namespace imcheck::kernels
