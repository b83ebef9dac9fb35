#include "imcheck/symexpr/check.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "imcheck/kernels/sampling.hpp"
#include "imcheck/symexpr/compiled.hpp"

namespace imcheck::sym {

namespace {

std::vector<std::string> variable_universe(const std::vector<Comparison>& cs) {
  std::vector<std::string> vars;
  for (const auto& c : cs) {
    for (auto& v : c.lhs.free_variables()) vars.push_back(v);
    for (auto& v : c.rhs.free_variables()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end(), [](const std::string& a, const std::string& b) { return natural_less(a, b); });
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

// Integer coordinates inside the box, preferring small positive values.
std::vector<double> lattice_values(double lo, double hi) {
  std::vector<double> vals;
  for (int v = 1; v <= hi; ++v) vals.push_back(v);
  if (lo <= 0 && hi >= 0) vals.push_back(0);
  for (int v = -1; v >= lo; --v) vals.push_back(v);
  return vals;
}

struct Probe {
  std::vector<double> point;
  double lhs;
  double rhs;
};

// First point, lattice first and then the random samples, at which the pair
// differs by more than `tol`.
std::optional<Probe> find_counterexample(const CompiledExpr& lhs, const CompiledExpr& rhs, std::size_t dim,
                                         const std::vector<double>& samples, const CheckOptions& opts,
                                         double tol) {
  auto test = [&](std::span<const double> p) -> std::optional<Probe> {
    double a = lhs(p);
    double b = rhs(p);
    if (std::isnan(a) || std::isnan(b)) return std::nullopt;
    if (kernels::scaled_residual(a, b) > tol) return Probe{{p.begin(), p.end()}, a, b};
    return std::nullopt;
  };
  auto vals = lattice_values(opts.box_lo, opts.box_hi);
  if (!vals.empty() && dim <= 6) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim && total <= 4096; ++i) total *= vals.size();
    if (total <= 4096) {
      std::vector<std::size_t> digits(dim, 0);
      std::vector<double> p(dim);
      for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < dim; ++i) p[i] = vals[digits[i]];
        if (auto hit = test(p)) return hit;
        for (std::size_t i = dim; i-- > 0;) {
          if (++digits[i] < vals.size()) break;
          digits[i] = 0;
        }
      }
    }
  }
  const std::size_t n = dim == 0 ? 1 : samples.size() / dim;
  for (std::size_t i = 0; i < n; ++i)
    if (auto hit = test(std::span<const double>(samples).subspan(i * dim, dim))) return hit;
  return std::nullopt;
}

Point to_point(const std::vector<std::string>& vars, const std::vector<double>& values) {
  Point p;
  for (std::size_t i = 0; i < vars.size(); ++i) p[vars[i]] = values[i];
  return p;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

CheckOutcome compare_all(const std::vector<Comparison>& comparisons, const CheckOptions& opts) {
  CheckOutcome out;
  std::vector<std::size_t> numeric;
  std::size_t first_definite = kernels::npos;
  for (std::size_t k = 0; k < comparisons.size(); ++k) {
    if (opts.mode == Mode::Numeric) {
      numeric.push_back(k);
      continue;
    }
    Expr diff = comparisons[k].lhs - comparisons[k].rhs;
    if (diff.is_zero()) continue;
    if (diff.is_polynomial()) {
      first_definite = std::min(first_definite, k);
      continue;
    }
    numeric.push_back(k);
  }
  out.numeric_comparisons = numeric.size();
  if (numeric.empty() && first_definite == kernels::npos) return out;

  const auto vars = variable_universe(comparisons);
  const std::size_t dim = vars.size();
  const auto samples = kernels::sample_box(dim, opts.samples, opts.seed, {opts.box_lo, opts.box_hi});
  const std::size_t n = dim == 0 ? 1 : opts.samples;

  std::size_t first_numeric = kernels::npos;
  if (!numeric.empty()) {
    std::vector<CompiledExpr> lhs, rhs;
    for (auto k : numeric) {
      lhs.emplace_back(comparisons[k].lhs, vars);
      rhs.emplace_back(comparisons[k].rhs, vars);
    }
    auto scan = opts.parallel ? kernels::scan_pairs_parallel(lhs, rhs, samples, dim, opts.tol)
                              : kernels::scan_pairs_serial(lhs, rhs, samples, dim, opts.tol);
    out.max_residual = scan.max_residual;
    if (scan.first_failure != kernels::npos) {
      first_numeric = numeric[scan.first_failure / n];
    } else if (scan.first_domain_error != kernels::npos) {
      out.verdict = Verdict::Inconclusive;
      std::size_t k = numeric[scan.first_domain_error / n];
      auto values = std::span<const double>(samples).subspan((scan.first_domain_error % n) * dim, dim);
      out.note = "domain error while sampling '" + comparisons[k].label + "'";
      out.witness = Witness{comparisons[k].label, to_point(vars, {values.begin(), values.end()}), NAN, NAN};
    }
  }

  const std::size_t first = std::min(first_definite, first_numeric);
  if (first == kernels::npos) return out;

  out.verdict = Verdict::Fail;
  const Comparison& c = comparisons[first];
  CompiledExpr lhs(c.lhs, vars);
  CompiledExpr rhs(c.rhs, vars);
  // A nonzero polynomial may be tiny on the box; fall back to any nonzero gap.
  auto probe = find_counterexample(lhs, rhs, dim, samples, opts, opts.tol);
  if (!probe) probe = find_counterexample(lhs, rhs, dim, samples, opts, 0.0);
  if (probe) {
    out.witness = Witness{c.label, to_point(vars, probe->point), probe->lhs, probe->rhs};
    out.max_residual = std::max(out.max_residual, kernels::scaled_residual(probe->lhs, probe->rhs));
  } else {
    out.witness = Witness{c.label, {}, NAN, NAN};
  }
  out.note = first == first_definite ? "symbolic difference: " + (c.lhs - c.rhs).str() : "numeric mismatch";
  return out;
}

CheckOutcome expr_equal(const Expr& a, const Expr& b, const CheckOptions& opts) {
  return compare_all({Comparison{"lhs == rhs", a, b}}, opts);
}

}  // namespace imcheck::sym
