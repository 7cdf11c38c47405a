#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "zstab/zstab.hpp"

namespace boost::multiprecision {
// gtest failure messages in p/q form
inline void PrintTo(const zstab::Rational& r, std::ostream* os) { *os << zstab::to_string(r); }
}  // namespace boost::multiprecision

namespace zt {

using zstab::Rational;
using zstab::RatInterval;

inline Rational R(const char* s) { return zstab::parse_rational(s); }
inline Rational Q(long long p, long long q = 1) { return zstab::make_rational(p, q); }

/// count deterministic rationals in I: the endpoints, the midpoint, then
/// lo + k/den * width with random k and den in [1, 2^20].
inline std::vector<Rational> samples(const RatInterval& I, int count, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> out{I.lo(), I.hi(), I.mid()};
  while (static_cast<int>(out.size()) < count) {
    const long long den = 1 + static_cast<long long>(rng() % (1u << 20));
    const long long k = static_cast<long long>(rng() % static_cast<std::uint64_t>(den + 1));
    out.push_back(I.lo() + Q(k, den) * I.width());
  }
  return out;
}

/// Grid lo, lo + step, ..., up to hi.
inline std::vector<Rational> grid(const RatInterval& I, const Rational& step) {
  std::vector<Rational> out;
  for (Rational x = I.lo(); x <= I.hi(); x += step) out.push_back(x);
  return out;
}

}  // namespace zt
