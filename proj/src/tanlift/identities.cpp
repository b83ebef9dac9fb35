#include "imcheck/tanlift/identities.hpp"

#include <algorithm>

namespace imcheck::tanlift {

using cartan::component_comparisons;
using cartan::Identity;
using cartan::Indices;
using cartan::random_form;

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

TangentChart chart_for(std::mt19937_64& rng) {
  return TangentChart(cartan::numbered_chart("x", static_cast<std::size_t>(uniform_int(rng, 2, 3))));
}

KForm random_scalar(const Chart& c, std::mt19937_64& rng, sym::PolynomialShape shape = {3, 2, 4}) {
  return KForm::scalar(c, sym::random_polynomial(c.names(), rng, shape));
}

}  // namespace

KForm tau_coordinate(const TangentChart& tm, const KForm& a) {
  const int k = a.degree();
  KForm out(tm.total(), k - 1);
  // Every ordered k-tuple of distinct indices, as permutations of each subset.
  for (const auto& subset : cartan::increasing_tuples(tm.base_dim(), k)) {
    Indices perm = subset;
    do {
      Expr coeff = a.component(perm) * tm.velocity(static_cast<std::size_t>(perm[0]));
      out.add(Indices(perm.begin() + 1, perm.end()), coeff);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  Expr factorial(1);
  for (int i = 2; i < k; ++i) factorial *= Expr(i);
  return out.map_coefficients([&](const Expr& c) { return c / factorial; });
}

KForm basis_lift_expansion(const TangentChart& tm, const Indices& indices) {
  const int n = static_cast<int>(tm.base_dim());
  KForm out(tm.total(), static_cast<int>(indices.size()));
  for (std::size_t p = 0; p < indices.size(); ++p) {
    Indices idx = indices;
    idx[p] += n;
    out += KForm::basis(tm.total(), idx);
  }
  return out;
}

std::vector<Identity> tangent_identities() {
  std::vector<Identity> ids;
  ids.push_back({"d(f_T) = (df)_T", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm f = random_scalar(tm.base(), rng);
                   return component_comparisons("d f_T", d(tangent_lift(tm, f)), tangent_lift(tm, d(f)));
                 }});
  ids.push_back({"(f a)_T = f_T a^v + f^v a_T", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm f = random_scalar(tm.base(), rng, {2, 2, 3});
                   KForm a = random_form(tm.base(), uniform_int(rng, 0, static_cast<int>(tm.base_dim())), rng);
                   KForm lhs = tangent_lift(tm, wedge(f, a));
                   KForm rhs = wedge(tangent_lift(tm, f), vertical_lift(tm, a)) +
                               wedge(vertical_lift(tm, f), tangent_lift(tm, a));
                   return component_comparisons("product lift", lhs, rhs);
                 }});
  ids.push_back({"lift of dx^I is a sum of single lifts", [](std::mt19937_64& rng) {
                   TangentChart tm(cartan::numbered_chart("x", static_cast<std::size_t>(uniform_int(rng, 3, 4))));
                   int k = uniform_int(rng, 2, 3);
                   auto tuples = cartan::increasing_tuples(tm.base_dim(), k);
                   Indices idx = tuples[std::uniform_int_distribution<std::size_t>(0, tuples.size() - 1)(rng)];
                   std::shuffle(idx.begin(), idx.end(), rng);
                   return component_comparisons("basis lift", tangent_lift(tm, KForm::basis(tm.base(), idx)),
                                                basis_lift_expansion(tm, idx));
                 }});
  ids.push_back({"a_T = d tau(a) + tau(d a)", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm a = random_form(tm.base(), uniform_int(rng, 1, static_cast<int>(tm.base_dim())), rng);
                   return component_comparisons("a_T", tangent_lift(tm, a), d(tau(tm, a)) + tau(tm, d(a)));
                 }});
  ids.push_back({"d(a_T) = (d a)_T", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm a = random_form(tm.base(), uniform_int(rng, 0, static_cast<int>(tm.base_dim())), rng);
                   return component_comparisons("d a_T", d(tangent_lift(tm, a)), tangent_lift(tm, d(a)));
                 }});
  ids.push_back({"tau(a) coordinate expansion", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm a = random_form(tm.base(), uniform_int(rng, 1, static_cast<int>(tm.base_dim())), rng);
                   return component_comparisons("tau", tau(tm, a), tau_coordinate(tm, a));
                 }});
  ids.push_back({"tau(w) = (w#)^* theta_can", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   CotangentChart cot(tm.base());
                   KForm w = random_form(tm.base(), 2, rng);
                   return component_comparisons("tau(w)", tau(tm, w), pullback(sharp(w, tm, cot), cot.theta_can()));
                 }});
  ids.push_back({"w_T = -(w#)^* w_can + tau(d w)", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   CotangentChart cot(tm.base());
                   KForm w = random_form(tm.base(), 2, rng);
                   return component_comparisons("w_T", tangent_lift(tm, w),
                                                -pullback(sharp(w, tm, cot), cot.omega_can()) + tau(tm, d(w)));
                 }});
  ids.push_back({"w_T = Theta o Tw# o J", [](std::mt19937_64& rng) {
                   TangentChart tm = chart_for(rng);
                   KForm w = random_form(tm.base(), 2, rng);
                   return component_comparisons("sharp lift", tangent_lift(tm, w), tangent_lift_by_sharp(tm, w));
                 }});
  return ids;
}

}  // namespace imcheck::tanlift
