#pragma once

// Finite-intersection bounds for enumerated zero sets against compact
// intervals, and the finite-horizon eventually-bounded-away check.

#include <cstdint>
#include <span>

#include "zstab/zstability.hpp"

namespace zstab {

/// For every n > N, dist(z_n, X) >= sep > 0; so every zero in X is among z_1..z_N.
struct IsolationCertificate {
  std::uint64_t N = 0;
  RatInterval X;
  Rational sep;
  Rational evidence;  // tail_sep(N, X) as reported by the enumeration
};

/// Least N with tail_sep(N, X) > 0, by doubling then binary search
/// (tail_sep is nondecreasing in N).
inline IsolationCertificate finite_intersection_rank(const LocatedZeroSet& Z, const RatInterval& X,
                                                     std::uint64_t max_rank = std::uint64_t{1} << 40) {
  const auto* ez = Z.enumerated_zeros();
  require(ez != nullptr, Errc::precondition, "finite_intersection_rank needs an enumerated zero set");
  auto separates = [&](std::uint64_t n) { return ez->tail_sep(n, X) > 0; };

  std::uint64_t hi = 0;
  if (!separates(0)) {
    hi = 1;
    while (!separates(hi)) {
      if (hi >= max_rank) fail(Errc::tail_not_separated, "no rank up to the search budget separates the tail");
      hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // !separates(lo) holds (lo = 0 or a failed doubling step)
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (separates(mid)) hi = mid;
      else lo = mid;
    }
  }
  const Rational sep = ez->tail_sep(hi, X);
  return {hi, X, sep, sep};
}

/// |x - seq[n]| >= delta for every 1-based index n from N to the end of the
/// prefix. Necessary, not sufficient, for the infinite property.
inline bool eventually_bounded_away_check(std::span<const Rational> seq, const Rational& x, std::size_t N,
                                          const Rational& delta) {
  require(N >= 1 && N <= seq.size(), Errc::precondition, "N must index into the sequence prefix");
  for (std::size_t n = N; n <= seq.size(); ++n)
    if (abs(x - seq[n - 1]) < delta) return false;
  return true;
}

}  // namespace zstab
