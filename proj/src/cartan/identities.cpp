#include "imcheck/cartan/identities.hpp"

#include <exception>

namespace imcheck::cartan {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::uint64_t trial_seed(std::uint64_t seed, const std::string& name, std::size_t t) {
  // splitmix64 finalizer over the combined inputs
  std::uint64_t z = seed ^ (std::hash<std::string>{}(name) + 0x9e3779b97f4a7c15ULL * (t + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TrialOutcome {
  std::size_t comparisons = 0;
  std::size_t numeric = 0;
  bool failed = false;
  std::string description;
};

}  // namespace

Chart numbered_chart(std::string_view stem, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::string(stem) + std::to_string(i));
  return Chart(std::move(names));
}

std::vector<Indices> increasing_tuples(std::size_t n, int k) {
  std::vector<Indices> out;
  if (k < 0 || static_cast<std::size_t>(k) > n) return out;
  Indices cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int p = k - 1;
    while (p >= 0 && cur[static_cast<std::size_t>(p)] == static_cast<int>(n) - k + p) --p;
    if (p < 0) break;
    ++cur[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < k; ++q) cur[static_cast<std::size_t>(q)] = cur[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

KForm random_form(const Chart& chart, int degree, std::mt19937_64& rng, sym::PolynomialShape shape) {
  const auto tuples = increasing_tuples(chart.dim(), degree);
  KForm out(chart, degree);
  // redraw zero forms so every trial exercises something
  for (int attempt = 0; out.is_zero() && !tuples.empty() && attempt < 64; ++attempt)
    for (const auto& idx : tuples)
      if (std::bernoulli_distribution(0.7)(rng)) out.add(idx, sym::random_polynomial(chart.names(), rng, shape));
  return out;
}

VField random_field(const Chart& chart, std::mt19937_64& rng, sym::PolynomialShape shape) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < chart.dim(); ++i) comps.push_back(sym::random_polynomial(chart.names(), rng, shape));
  return VField(chart, std::move(comps));
}

ChartMap random_map(const Chart& source, const Chart& target, std::mt19937_64& rng, sym::PolynomialShape shape) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < target.dim(); ++i) comps.push_back(sym::random_polynomial(source.names(), rng, shape));
  return ChartMap(source, target, std::move(comps));
}

KForm lie_derivative_coordinate(const VField& x, const KForm& a) {
  const Chart& chart = a.chart();
  const std::size_t n = chart.dim();
  KForm out(chart, a.degree());
  for (const auto& idx : increasing_tuples(n, a.degree())) {
    Expr c = x.apply(a.component(idx));
    for (std::size_t p = 0; p < idx.size(); ++p) {
      for (std::size_t j = 0; j < n; ++j) {
        Expr dx = x[j].diff(chart.name(static_cast<std::size_t>(idx[p])));
        if (dx.is_zero()) continue;
        Indices swapped = idx;
        swapped[p] = static_cast<int>(j);
        c += dx * a.component(swapped);
      }
    }
    out.add(idx, c);
  }
  return out;
}

IdentityResult run_identity(const Identity& identity, std::size_t trials, std::uint64_t seed) {
  std::vector<TrialOutcome> outcomes(trials);
  sym::CheckOptions opts;
  opts.parallel = false;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    auto& o = outcomes[static_cast<std::size_t>(t)];
    std::mt19937_64 rng(trial_seed(seed, identity.name, static_cast<std::size_t>(t)));
    try {
      auto comps = identity.trial(rng);
      auto r = sym::compare_all(comps, opts);
      o.comparisons = comps.size();
      o.numeric = r.numeric_comparisons;
      if (!r.passed()) {
        o.failed = true;
        o.description = "trial " + std::to_string(t) + ": " + (r.witness ? r.witness->label + ": " : "") + r.note;
      }
    } catch (const std::exception& e) {
      o.failed = true;
      o.description = "trial " + std::to_string(t) + ": " + e.what();
    }
  }
  IdentityResult res{identity.name, trials, 0, 0, 0, {}};
  for (const auto& o : outcomes) {
    res.comparisons += o.comparisons;
    res.numeric += o.numeric;
    if (o.failed) {
      if (res.failures == 0) res.first_failure = o.description;
      ++res.failures;
    }
  }
  return res;
}

std::vector<Identity> exterior_identities() {
  auto chart_for = [](std::mt19937_64& rng) { return numbered_chart("x", uniform(rng, 2, 4)); };
  std::vector<Identity> ids;
  ids.push_back({"d(d(a)) = 0", [=](std::mt19937_64& rng) {
                   Chart c = chart_for(rng);
                   KForm a = random_form(c, uniform_int(rng, 0, static_cast<int>(c.dim()) - 2), rng);
                   return component_comparisons("d d a", d(d(a)), KForm(c, a.degree() + 2));
                 }});
  ids.push_back({"L_X a = i_X d a + d i_X a", [=](std::mt19937_64& rng) {
                   Chart c = chart_for(rng);
                   KForm a = random_form(c, uniform_int(rng, 0, static_cast<int>(c.dim())), rng);
                   VField x = random_field(c, rng);
                   return component_comparisons("L_X a", lie_derivative(x, a), lie_derivative_coordinate(x, a));
                 }});
  ids.push_back({"i_X i_X a = 0", [=](std::mt19937_64& rng) {
                   Chart c = chart_for(rng);
                   KForm a = random_form(c, uniform_int(rng, 2, static_cast<int>(c.dim())), rng);
                   VField x = random_field(c, rng);
                   return component_comparisons("i_X i_X a", interior(x, interior(x, a)), KForm(c, a.degree() - 2));
                 }});
  ids.push_back({"L_X (a ∧ b) = L_X a ∧ b + a ∧ L_X b", [=](std::mt19937_64& rng) {
                   Chart c = chart_for(rng);
                   int k = uniform_int(rng, 0, static_cast<int>(c.dim()) - 1);
                   KForm a = random_form(c, k, rng, {2, 2, 3});
                   KForm b = random_form(c, uniform_int(rng, 0, static_cast<int>(c.dim()) - k), rng, {2, 2, 3});
                   VField x = random_field(c, rng, {2, 2, 3});
                   return component_comparisons("Leibniz", lie_derivative(x, wedge(a, b)),
                                                wedge(lie_derivative(x, a), b) + wedge(a, lie_derivative(x, b)));
                 }});
  ids.push_back({"L_[X,Y] a = L_X L_Y a - L_Y L_X a", [=](std::mt19937_64& rng) {
                   Chart c = chart_for(rng);
                   KForm a = random_form(c, uniform_int(rng, 0, static_cast<int>(c.dim())), rng, {2, 2, 3});
                   VField x = random_field(c, rng, {2, 2, 3});
                   VField y = random_field(c, rng, {2, 2, 3});
                   return component_comparisons(
                       "commutator", lie_derivative(field_bracket(x, y), a),
                       lie_derivative(x, lie_derivative(y, a)) - lie_derivative(y, lie_derivative(x, a)));
                 }});
  ids.push_back({"F^* d a = d F^* a", [=](std::mt19937_64& rng) {
                   Chart src = numbered_chart("y", uniform(rng, 2, 4));
                   Chart tgt = chart_for(rng);
                   ChartMap f = random_map(src, tgt, rng);
                   KForm a = random_form(tgt, uniform_int(rng, 0, static_cast<int>(tgt.dim()) - 1), rng);
                   return component_comparisons("pullback d", pullback(f, d(a)), d(pullback(f, a)));
                 }});
  ids.push_back({"F^*(a ∧ b) = F^*a ∧ F^*b", [=](std::mt19937_64& rng) {
                   Chart src = numbered_chart("y", uniform(rng, 2, 4));
                   Chart tgt = chart_for(rng);
                   ChartMap f = random_map(src, tgt, rng, {2, 2, 3});
                   int k = uniform_int(rng, 0, static_cast<int>(tgt.dim()) - 1);
                   KForm a = random_form(tgt, k, rng, {2, 2, 3});
                   KForm b = random_form(tgt, uniform_int(rng, 0, static_cast<int>(tgt.dim()) - k), rng, {2, 2, 3});
                   return component_comparisons("pullback wedge", pullback(f, wedge(a, b)),
                                                wedge(pullback(f, a), pullback(f, b)));
                 }});
  return ids;
}

}  // namespace imcheck::cartan
