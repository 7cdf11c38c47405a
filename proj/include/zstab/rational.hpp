#pragma once

// Exact scalars for every certificate: rationals, closed rational intervals
// and Gaussian rationals.

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "zstab/error.hpp"

namespace zstab {

// Expression templates are off so that `auto` always names a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

inline Rational make_rational(long long num, long long den = 1) {
  require(den != 0, Errc::precondition, "zero denominator");
  return Rational(Integer(num), Integer(den));
}

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// 2^e for any integer exponent.
inline Rational pow2(long e) {
  Integer p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational pow(const Rational& base, unsigned exp) {
  Rational result = 1;
  Rational b = base;
  while (exp != 0) {
    if (exp & 1U) result *= b;
    exp >>= 1U;
    if (exp != 0) b *= b;
  }
  return result;
}

inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / 2; }

/// Canonical "p/q" form; the denominator is always written, so 3 is "3/1".
inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail {
inline bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}
}  // namespace detail

/// Parses "p/q" with an optional leading minus on p and q > 0. Decimals and bare
/// integers are rejected.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    fail(Errc::parse, "rational must be written as p/q: '" + std::string(text) + "'");
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  const bool negative = !num.empty() && num.front() == '-';
  if (negative) num.remove_prefix(1);
  if (!detail::is_digits(num) || !detail::is_digits(den))
    fail(Errc::parse, "malformed rational '" + std::string(text) + "'");
  Integer p{std::string(num)};
  Integer q{std::string(den)};
  if (q == 0) fail(Errc::parse, "zero denominator in '" + std::string(text) + "'");
  if (negative) p = -p;
  return Rational(p, q);
}

/// Closed interval [lo, hi] with lo <= hi.
class RatInterval {
 public:
  RatInterval() = default;
  explicit RatInterval(Rational point) : lo_(point), hi_(std::move(point)) {}
  RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    require(lo_ <= hi_, Errc::precondition,
            "interval endpoints out of order: [" + to_string(lo_) + ", " + to_string(hi_) + "]");
  }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return midpoint(lo_, hi_); }
  bool degenerate() const { return lo_ == hi_; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const RatInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool intersects(const RatInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  /// Exact distance from x to the interval (0 inside).
  Rational distance(const Rational& x) const {
    if (x < lo_) return lo_ - x;
    if (x > hi_) return x - hi_;
    return 0;
  }

  /// Smallest |v| over the interval.
  Rational mig() const {
    if (lo_ > 0) return lo_;
    if (hi_ < 0) return -hi_;
    return 0;
  }
  /// Largest |v| over the interval.
  Rational mag() const { return std::max(abs(lo_), abs(hi_)); }

  /// Exact range of |v| over the interval.
  RatInterval abs_range() const { return {mig(), mag()}; }

  friend bool operator==(const RatInterval&, const RatInterval&) = default;

 private:
  Rational lo_{0};
  Rational hi_{0};
};

inline RatInterval hull(const RatInterval& a, const RatInterval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return {a.lo() + b.lo(), a.hi() + b.hi()};
}
inline RatInterval operator-(const RatInterval& a) { return {-a.hi(), -a.lo()}; }
inline RatInterval operator-(const RatInterval& a, const RatInterval& b) { return a + (-b); }
inline RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  const Rational p[] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
  return {*std::min_element(std::begin(p), std::end(p)), *std::max_element(std::begin(p), std::end(p))};
}
inline RatInterval operator*(const Rational& c, const RatInterval& a) {
  return c >= 0 ? RatInterval{c * a.lo(), c * a.hi()} : RatInterval{c * a.hi(), c * a.lo()};
}

/// Exact range of x^k over the interval.
inline RatInterval pow(const RatInterval& a, unsigned k) {
  if (k == 0) return RatInterval(Rational(1));
  const Rational l = pow(a.lo(), k);
  const Rational h = pow(a.hi(), k);
  if (k % 2 == 1) return {l, h};
  if (a.lo() >= 0) return {l, h};
  if (a.hi() <= 0) return {h, l};
  return {Rational(0), std::max(l, h)};
}

inline std::ostream& operator<<(std::ostream& os, const RatInterval& i) {
  return os << "[" << to_string(i.lo()) << ", " << to_string(i.hi()) << "]";
}

/// Gaussian rational re + i*im. Moduli are compared through exact squares.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  Rational norm2() const { return re * re + im * im; }

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

inline std::string to_string(const ComplexRational& z) { return to_string(z.re) + "+" + to_string(z.im) + "i"; }

}  // namespace zstab
