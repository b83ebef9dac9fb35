#include "imcheck/symexpr/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace imcheck::sym {

namespace {

using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::pair<std::int64_t, std::int64_t> reduce(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr Wide lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Rational make_reduced(Wide num, Wide den) {
  auto [n, d] = reduce(num, den);
  return Rational(n, d);
}

std::optional<std::int64_t> integer_root(std::int64_t value, std::int64_t n) {
  if (value < 0) {
    if (n % 2 == 0) return std::nullopt;
    auto r = integer_root(-value, n);
    if (!r) return std::nullopt;
    return -*r;
  }
  if (value < 2) return value;
  // Binary search on the root; r^n is evaluated with overflow saturation.
  std::int64_t lo = 1, hi = value;
  while (lo <= hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    Wide p = 1;
    bool over = false;
    for (std::int64_t i = 0; i < n; ++i) {
      p *= mid;
      if (p > value) {
        over = true;
        break;
      }
    }
    if (!over && p == value) return mid;
    if (over)
      hi = mid - 1;
    else
      lo = mid + 1;
  }
  return std::nullopt;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  auto [n, d] = reduce(num, den);
  num_ = n;
  den_ = d;
}

Rational Rational::from_decimal(std::string_view s) {
  Wide num = 0;
  Wide den = 1;
  std::size_t i = 0;
  bool digits = false;
  constexpr Wide cap = static_cast<Wide>(std::numeric_limits<std::int64_t>::max());
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    num = num * 10 + (s[i] - '0');
    digits = true;
    if (num > cap) throw std::overflow_error("numeric literal too large");
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      num = num * 10 + (s[i] - '0');
      den *= 10;
      digits = true;
      if (num > cap || den > cap) throw std::overflow_error("numeric literal too long");
    }
  }
  if (!digits) throw std::invalid_argument("malformed numeric literal");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    int exponent = 0;
    bool exp_digits = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      exponent = exponent * 10 + (s[i] - '0');
      exp_digits = true;
      if (exponent > 18) throw std::overflow_error("numeric literal exponent too large");
    }
    if (!exp_digits) throw std::invalid_argument("malformed numeric exponent");
    for (int k = 0; k < exponent; ++k) {
      if (negative)
        den *= 10;
      else
        num *= 10;
      if (num > cap || den > cap) throw std::overflow_error("numeric literal out of range");
    }
  }
  if (i != s.size()) throw std::invalid_argument("malformed numeric literal");
  return make_reduced(num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::pow(std::int64_t e) const {
  if (e < 0) {
    if (num_ == 0) throw std::domain_error("zero raised to a negative power");
    return Rational(den_, num_).pow(-e);
  }
  Rational result(1);
  Rational base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

std::optional<Rational> Rational::root(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("root index must be positive");
  if (n == 1) return *this;
  auto rn = integer_root(num_, n);
  auto rd = integer_root(den_, n);
  if (!rn || !rd) return std::nullopt;
  return Rational(*rn, *rd);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == 1 && b.den_ == 1) return make_reduced(Wide(a.num_) + b.num_, 1);
  return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide l = Wide(a.num_) * b.den_;
  Wide r = Wide(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace imcheck::sym
