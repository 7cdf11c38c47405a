#pragma once

// Seeded randomized check of the product bound delta = gamma (eps/2)^m:
// every sampled z with gamma |prod (z - z_k)| < delta must lie within eps of
// some root. Products are evaluated directly; comparisons use exact squares.

#include <cstdint>
#include <random>
#include <vector>

#include "zstab/uniformbounds.hpp"

namespace zstab {

/// mt19937_64 raw output only, so sequences are identical on every platform.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return v % n;
  }

  /// Uniform dyadic k / 2^bits in [-1, 1].
  Rational signed_unit(unsigned bits) {
    const std::uint64_t span = (std::uint64_t{1} << (bits + 1)) + 1;
    const auto k = static_cast<long long>(below(span)) - static_cast<long long>(std::uint64_t{1} << bits);
    return Rational(Integer(k), numerator(pow2(static_cast<long>(bits))));
  }

 private:
  std::mt19937_64 engine_;
};

/// Roots with dyadic coordinates (resolution 2^-bits) in the closed unit disk.
inline std::vector<ComplexRational> random_unit_disk_roots(TrialRng& rng, unsigned degree, unsigned bits = 8) {
  std::vector<ComplexRational> roots;
  while (roots.size() < degree) {
    ComplexRational z{rng.signed_unit(bits), rng.signed_unit(bits)};
    if (z.norm2() <= 1) roots.push_back(z);
  }
  return roots;
}

struct PolyboundSummary {
  std::uint64_t instances = 0;    // (root multiset, eps) pairs
  std::uint64_t samples = 0;      // points drawn
  std::uint64_t hits = 0;         // points with gamma |prod| < delta
  std::uint64_t min_hits = 0;     // fewest hits in any single instance
  std::uint64_t violations = 0;   // hits farther than eps from every root
};

struct PolyboundOptions {
  std::uint64_t trials = 200;
  std::uint64_t seed = 7;
  std::vector<Rational> eps_values{make_rational(1, 2), make_rational(1, 4)};
  std::uint64_t hits_per_instance = 1000;
  std::uint64_t max_samples_per_instance = 200000;
  unsigned max_degree = 5;
};

/// Samples mix a log-uniform cloud around a random root (radius eps 2^-u,
/// u in [0, 48)) with uniform points in [-2, 2]^2.
inline PolyboundSummary run_polybound_trials(const PolyboundOptions& opt) {
  TrialRng rng(opt.seed);
  PolyboundSummary out;
  out.min_hits = ~std::uint64_t{0};
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    const auto degree = static_cast<unsigned>(1 + rng.below(opt.max_degree));
    PolyFactorization pf{random_unit_disk_roots(rng, degree), make_rational(static_cast<long long>(1 + rng.below(8)), 4)};
    for (const auto& eps : opt.eps_values) {
      const Rational delta = poly_uniform_modulus(pf.roots, pf.gamma, eps);
      const Rational delta2 = delta * delta;
      const Rational gamma2 = pf.gamma * pf.gamma;
      const Rational eps2 = eps * eps;
      std::uint64_t hits = 0;
      for (std::uint64_t s = 0; s < opt.max_samples_per_instance && hits < opt.hits_per_instance; ++s) {
        ComplexRational z;
        if (rng.below(8) != 0) {
          const auto& c = pf.roots[rng.below(pf.roots.size())];
          const Rational r = eps * pow2(-static_cast<long>(rng.below(48)));
          z = {c.re + r * rng.signed_unit(16), c.im + r * rng.signed_unit(16)};
        } else {
          z = {2 * rng.signed_unit(16), 2 * rng.signed_unit(16)};
        }
        ++out.samples;
        if (!(gamma2 * pf.product_abs2(z) < delta2)) continue;
        ++hits;
        bool near = false;
        for (const auto& r : pf.roots)
          if ((z - r).norm2() < eps2) {
            near = true;
            break;
          }
        if (!near) ++out.violations;
      }
      ++out.instances;
      out.hits += hits;
      out.min_hits = std::min(out.min_hits, hits);
    }
  }
  if (out.instances == 0) out.min_hits = 0;
  return out;
}

}  // namespace zstab
