#include "imcheck/tanlift/tangent.hpp"

#include <array>
#include <set>
#include <stdexcept>

namespace imcheck::tanlift {

namespace {

// Precomposed "letter with dot above" for ASCII letters; empty where Unicode
// has none.
constexpr std::array<const char*, 26> kDottedLower = {
    "ȧ", "ḃ", "ċ", "ḋ", "ė", "ḟ", "ġ", "ḣ", "", "", "", "", "ṁ",
    "ṅ", "ȯ", "ṗ", "", "ṙ", "ṡ", "ṫ", "", "", "ẇ", "ẋ", "ẏ", "ż"};
constexpr std::array<const char*, 26> kDottedUpper = {
    "Ȧ", "Ḃ", "Ċ", "Ḋ", "Ė", "Ḟ", "Ġ", "Ḣ", "İ", "", "", "", "Ṁ",
    "Ṅ", "Ȯ", "Ṗ", "", "Ṙ", "Ṡ", "Ṫ", "", "", "Ẇ", "Ẋ", "Ẏ", "Ż"};
constexpr const char* kCombiningDot = "̇";

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

Chart derived_chart(const Chart& base, const std::vector<std::string>& wanted) {
  std::set<std::string> taken(base.names().begin(), base.names().end());
  std::vector<std::string> names;
  for (auto name : wanted) {
    while (taken.count(name)) name += "_";
    taken.insert(name);
    names.push_back(std::move(name));
  }
  return Chart(std::move(names));
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(what) + ": chart mismatch");
}

// Components of `chart` restricted to positions [from, from + count).
std::vector<Expr> block(const Chart& chart, std::size_t from, std::size_t count) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(chart.coordinate(from + i));
  return out;
}

std::vector<Expr> concat(std::initializer_list<std::vector<Expr>> parts) {
  std::vector<Expr> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

std::string dotted(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty coordinate name");
  auto lead = static_cast<unsigned char>(name[0]);
  if (lead >= 'a' && lead <= 'z' && *kDottedLower[lead - 'a'])
    return kDottedLower[lead - 'a'] + std::string(name.substr(1));
  if (lead >= 'A' && lead <= 'Z' && *kDottedUpper[lead - 'A'])
    return kDottedUpper[lead - 'A'] + std::string(name.substr(1));
  std::size_t len = std::min(utf8_length(lead), name.size());
  return std::string(name.substr(0, len)) + kCombiningDot + std::string(name.substr(len));
}

// ---- charts ----

TangentChart::TangentChart(Chart base, FibreNaming naming) : base_(std::move(base)) {
  std::vector<std::string> wanted;
  for (const auto& n : base_.names()) wanted.push_back(naming == FibreNaming::Dot ? dotted(n) : "δ" + n);
  fibre_ = derived_chart(base_, wanted);
  total_ = base_ + fibre_;
}

ChartMap TangentChart::projection() const { return ChartMap(total_, base_, block(total_, 0, base_dim())); }

VField TangentChart::euler_field() const {
  std::vector<Expr> comps = block(fibre_, 0, base_dim());
  comps.resize(total_.dim());
  return VField(total_, std::move(comps));
}

CotangentChart::CotangentChart(Chart base) : base_(std::move(base)) {
  std::vector<std::string> wanted;
  for (const auto& n : base_.names()) wanted.push_back("p_" + n);
  momenta_ = derived_chart(base_, wanted);
  total_ = base_ + momenta_;
}

KForm CotangentChart::theta_can() const {
  KForm out(total_, 1);
  const int n = static_cast<int>(base_.dim());
  for (int i = 0; i < n; ++i) out.add({i}, total_.coordinate(static_cast<std::size_t>(n + i)));
  return out;
}

KForm CotangentChart::omega_can() const {
  KForm out(total_, 2);
  const int n = static_cast<int>(base_.dim());
  for (int i = 0; i < n; ++i) out.add({i, n + i}, Expr(1));
  return out;
}

// ---- lifts ----

KForm vertical_lift(const TangentChart& tm, const KForm& a) {
  require(a.chart() == tm.base(), "vertical_lift");
  return a.extend_to(tm.total());
}

KForm tau(const TangentChart& tm, const KForm& a) {
  if (a.degree() == 0) throw std::invalid_argument("tau: degree-0 form");
  return interior(tm.euler_field(), vertical_lift(tm, a));
}

KForm tangent_lift(const TangentChart& tm, const KForm& a) {
  return lie_derivative(tm.euler_field(), vertical_lift(tm, a));
}

ChartMap tangent_map(const ChartMap& f, const TangentChart& source, const TangentChart& target) {
  require(f.source() == source.base() && f.target() == target.base(), "tangent_map");
  std::vector<Expr> comps = f.components();
  for (const auto& fa : f.components()) {
    Expr v;
    for (std::size_t i = 0; i < source.base_dim(); ++i) v += fa.diff(source.base().name(i)) * source.velocity(i);
    comps.push_back(v);
  }
  return ChartMap(source.total(), target.total(), std::move(comps));
}

ChartMap sharp(const KForm& omega, const TangentChart& tm, const CotangentChart& cot) {
  if (omega.degree() != 2) throw std::invalid_argument("sharp: expected a 2-form");
  require(omega.chart() == tm.base() && cot.base() == tm.base(), "sharp");
  const std::size_t n = tm.base_dim();
  std::vector<Expr> comps = block(tm.total(), 0, n);
  for (std::size_t j = 0; j < n; ++j) {
    Expr p;
    for (std::size_t i = 0; i < n; ++i)
      p += tm.velocity(i) * omega.component({static_cast<int>(i), static_cast<int>(j)});
    comps.push_back(p);
  }
  return ChartMap(tm.total(), cot.total(), std::move(comps));
}

ChartMap canonical_involution(const TangentChart& tm, const TangentChart& ttm) {
  require(ttm.base() == tm.total(), "canonical_involution");
  const Chart& c = ttm.total();
  const std::size_t n = tm.base_dim();
  return ChartMap(c, c, concat({block(c, 0, n), block(c, 2 * n, n), block(c, n, n), block(c, 3 * n, n)}));
}

ChartMap tangent_cotangent_flip(const CotangentChart& cot, const TangentChart& tcot, const TangentChart& tm,
                                const CotangentChart& cotm) {
  require(tcot.base() == cot.total() && cotm.base() == tm.total() && tm.base() == cot.base(),
          "tangent_cotangent_flip");
  const Chart& c = tcot.total();
  const std::size_t n = tm.base_dim();
  return ChartMap(c, cotm.total(),
                  concat({block(c, 0, n), block(c, 2 * n, n), block(c, 3 * n, n), block(c, n, n)}));
}

ChartMap dual_flip(const TangentChart& dual_tangent, std::size_t base_dim, const Chart& target) {
  const Chart& c = dual_tangent.total();
  const std::size_t n = base_dim;
  require(n <= dual_tangent.base_dim() && target.dim() == c.dim(), "dual_flip");
  const std::size_t r = dual_tangent.base_dim() - n;
  return ChartMap(c, target,
                  concat({block(c, 0, n), block(c, 2 * n + r, r), block(c, n + r, n), block(c, n, r)}));
}

KForm tangent_lift_by_sharp(const TangentChart& tm, const KForm& omega) {
  CotangentChart cot(tm.base());
  TangentChart tcot(cot.total());
  TangentChart ttm(tm.total(), FibreNaming::Delta);
  CotangentChart cotm(tm.total());

  ChartMap lifted = tangent_cotangent_flip(cot, tcot, tm, cotm)
                        .after(tangent_map(sharp(omega, tm, cot), ttm, tcot))
                        .after(canonical_involution(tm, ttm));

  // The covector at X is i_X α_T, so α_T(∂_A, ∂_B) = ∂(covector_B)/∂X^A.
  const std::size_t dim = tm.total().dim();
  std::vector<std::vector<Expr>> bilinear(dim, std::vector<Expr>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    const Expr& covector = lifted.components()[dim + b];
    for (std::size_t a = 0; a < dim; ++a) bilinear[a][b] = covector.diff(ttm.fibre().name(a));
  }
  KForm out(tm.total(), 2);
  for (std::size_t a = 0; a < dim; ++a) {
    if (!sym::expr_equal(bilinear[a][a], 0).passed())
      throw std::logic_error("tangent_lift_by_sharp: nonzero diagonal");
    for (std::size_t b = a + 1; b < dim; ++b) {
      if (!sym::expr_equal(bilinear[a][b], -bilinear[b][a]).passed())
        throw std::logic_error("tangent_lift_by_sharp: bilinear form is not antisymmetric");
      out.add({static_cast<int>(a), static_cast<int>(b)}, bilinear[a][b]);
    }
  }
  return out;
}

}  // namespace imcheck::tanlift
