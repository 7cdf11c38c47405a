#pragma once

// Certified uniform moduli (inf of |f| over the region bounded away from the
// zeros, and the product bound for polynomials with known roots), a
// refutation-only falsifier for claimed (eps, delta) pairs, and the
// sublevel-set coverage test.

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "zstab/zstability.hpp"

namespace zstab {

/// domain minus the open balls of `radius` around `centers`, as sorted closed
/// intervals (possibly degenerate). Boundary points stay in the set.
inline std::vector<RatInterval> exclusion_region(const RatInterval& domain, const std::vector<Rational>& centers,
                                                 const Rational& radius) {
  std::vector<Rational> sorted = centers;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RatInterval> out;
  Rational cur = domain.lo();
  bool done = false;
  for (const auto& z : sorted) {
    const Rational a = z - radius;
    const Rational b = z + radius;
    if (a >= cur) {
      const Rational end = std::min(a, domain.hi());
      if (cur <= end) out.emplace_back(cur, end);
      cur = b;
    } else if (b > cur) {
      cur = b;
    }
    if (cur > domain.hi()) {
      done = true;
      break;
    }
  }
  if (!done && cur <= domain.hi()) out.emplace_back(cur, domain.hi());
  return out;
}

enum class CertificateMethod { inf_over_k, polynomial_formula };

inline std::string_view to_string(CertificateMethod m) {
  return m == CertificateMethod::inf_over_k ? "inf_over_k" : "polynomial_formula";
}

/// Sound uniform claim: |f(x)| < delta implies dist(x, Z) < eps/2 < eps.
/// `vacuous` marks an empty K, where delta is +infinity and `delta` is unused.
struct UniformCertificate {
  Rational eps;
  Rational delta;
  bool vacuous = false;
  std::vector<RatInterval> K;
  InfBracket inf_bracket;
  Rational tau;
  CertificateMethod method = CertificateMethod::inf_over_k;

  /// Does the certificate make the stopping decision |v| < delta?
  bool accepts(const Rational& v_abs) const { return vacuous || v_abs < delta; }
};

inline UniformCertificate uniform_modulus(const RealFunc& f, const LocatedZeroSet& Z, const Rational& eps,
                                          const Rational& tau, const InfOptions& opt = {}) {
  require(eps > 0 && tau > 0, Errc::precondition, "eps and tau must be positive");
  const auto* fz = Z.finite_zeros();
  require(fz != nullptr, Errc::precondition, "uniform modulus needs a finite zero set");
  require(!fz->points.empty(), Errc::uninhabited_zero_set, "zero set must be inhabited");

  UniformCertificate cert;
  cert.eps = eps;
  cert.tau = tau;
  cert.K = exclusion_region(f.domain(), fz->points, eps / 2);
  if (cert.K.empty()) {
    cert.vacuous = true;
    cert.delta = 0;
    return cert;
  }
  cert.inf_bracket = inf_certified(f, cert.K, tau, opt);
  if (cert.inf_bracket.lower <= 0)
    fail(Errc::cannot_certify, "inf |f| over K has no positive lower bound (inf bracket upper " +
                                   to_string(cert.inf_bracket.upper) + " at x = " + to_string(cert.inf_bracket.argmin) +
                                   ")");
  cert.delta = cert.inf_bracket.lower;
  return cert;
}

/// Certified uniform moduli at several tolerances, packaged as a monotone
/// Certified modulus (entries lowered where needed to keep delta nondecreasing).
inline Modulus certified_modulus(const RealFunc& f, const LocatedZeroSet& Z, std::vector<Rational> eps_values,
                                 const Rational& tau) {
  std::sort(eps_values.begin(), eps_values.end());
  eps_values.erase(std::unique(eps_values.begin(), eps_values.end()), eps_values.end());
  std::vector<CertifiedEntry> entries;
  for (const auto& e : eps_values) {
    auto cert = uniform_modulus(f, Z, e, tau);
    require(!cert.vacuous, Errc::precondition, "vacuous certificate at eps = " + to_string(e));
    entries.push_back({e, cert.delta, "inf_over_k:eps=" + to_string(e) + ";tau=" + to_string(tau)});
  }
  for (std::size_t i = entries.size(); i-- > 1;)
    entries[i - 1].delta = std::min(entries[i - 1].delta, entries[i].delta);
  return Modulus::uniform(CertifiedModulus{std::move(entries)});
}

// ---------------------------------------------------------------------------
// Polynomial product bound

/// f(z) = g * prod (z - z_k) with |g| >= gamma.
struct PolyFactorization {
  std::vector<ComplexRational> roots;
  Rational gamma;

  unsigned m() const { return static_cast<unsigned>(roots.size()); }

  /// |prod (z - z_k)|^2 by direct product.
  Rational product_abs2(const ComplexRational& z) const {
    Rational acc = 1;
    for (const auto& r : roots) acc *= (z - r).norm2();
    return acc;
  }
};

inline Rational poly_uniform_modulus(const std::vector<ComplexRational>& roots, const Rational& gamma,
                                     const Rational& eps) {
  require(gamma > 0, Errc::precondition, "gamma must be positive");
  require(!roots.empty(), Errc::precondition, "root list must be nonempty");
  require(eps > 0, Errc::precondition, "eps must be positive");
  return gamma * pow(Rational(eps / 2), static_cast<unsigned>(roots.size()));
}

inline Modulus poly_modulus(const PolyFactorization& pf) {
  require(!pf.roots.empty(), Errc::precondition, "root list must be nonempty");
  return Modulus::uniform(FormulaModulus{pf.gamma, pf.m()});
}

// ---------------------------------------------------------------------------
// Falsifier

enum class FalsifyStatus { found, survived };

inline std::string_view to_string(FalsifyStatus s) { return s == FalsifyStatus::found ? "found" : "survived"; }

struct FalsifyResult {
  FalsifyStatus status = FalsifyStatus::survived;
  std::optional<FalsificationWitness> witness;
  std::uint64_t points_evaluated = 0;
  unsigned finest_level = 0;
};

/// Searches the region at distance >= eps from Z for a point with |f(x)| < delta:
/// region endpoints first, then dyadic grids j/2^L level by level (L = 0, 1, ...),
/// then local refinement around the smallest |f| seen. A level that yields
/// candidates returns the one with least |f| (ties: smallest x). Refutation
/// only: "survived" is not a proof of soundness.
inline FalsifyResult falsify_uniform(const RealFunc& f, const LocatedZeroSet& Z, const Rational& eps,
                                     const Rational& delta, std::uint64_t budget = std::uint64_t{1} << 16) {
  require(eps > 0, Errc::precondition, "eps must be positive");
  require(delta > 0, Errc::precondition, "delta must be positive");
  const auto* fz = Z.finite_zeros();
  require(fz != nullptr, Errc::precondition, "falsifier needs a finite zero set");
  require(!fz->points.empty(), Errc::uninhabited_zero_set, "zero set must be inhabited");

  const auto region = exclusion_region(f.domain(), fz->points, eps);
  FalsifyResult result;
  if (region.empty()) return result;

  struct Candidate {
    Rational x;
    Rational v;
  };
  std::optional<Candidate> best;       // least |f| overall
  std::optional<Candidate> level_best; // least |f| below delta in the current level
  auto probe = [&](const Rational& x) {
    ++result.points_evaluated;
    Rational v = abs(eval_exact(f, x));
    auto better = [&](const std::optional<Candidate>& c) { return !c || v < c->v || (v == c->v && x < c->x); };
    if (v < delta && better(level_best)) level_best = Candidate{x, v};
    if (better(best)) best = Candidate{x, std::move(v)};
  };
  auto make_witness = [&](const Candidate& c) {
    result.status = FalsifyStatus::found;
    result.witness = FalsificationWitness{c.x, c.v, finite_distance(fz->points, c.x), delta, eps};
    return result;
  };

  const std::uint64_t grid_budget = budget - budget / 8;
  for (const auto& I : region) {
    probe(I.lo());
    if (!I.degenerate()) probe(I.hi());
  }
  if (level_best) return make_witness(*level_best);

  for (unsigned level = 0; result.points_evaluated < grid_budget && level < 62; ++level) {
    result.finest_level = level;
    const Integer scale = numerator(pow2(static_cast<long>(level)));
    for (const auto& I : region) {
      // j from ceil(lo * 2^L) to floor(hi * 2^L); odd j only past level 0
      const Rational lo_s = I.lo() * Rational(scale);
      const Rational hi_s = I.hi() * Rational(scale);
      Integer j = numerator(lo_s) / denominator(lo_s);
      if (Rational(j) < lo_s) j += 1;
      Integer j_end = numerator(hi_s) / denominator(hi_s);
      if (Rational(j_end) > hi_s) j_end -= 1;
      const int step = level == 0 ? 1 : 2;
      if (level > 0 && boost::multiprecision::abs(j) % 2 == 0) j += 1;
      for (; j <= j_end && result.points_evaluated < grid_budget; j += step)
        probe(Rational(j, scale));
    }
    if (level_best) return make_witness(*level_best);
  }

  // Local refinement around the best point seen.
  Candidate at = *best;
  for (long k = static_cast<long>(result.finest_level) + 1;
       k < static_cast<long>(result.finest_level) + 64 && result.points_evaluated < budget; ++k) {
    for (int side : {-1, 1}) {
      const Rational x = at.x + side * pow2(-k);
      const bool inside = std::any_of(region.begin(), region.end(), [&](const auto& I) { return I.contains(x); });
      if (!inside) continue;
      probe(x);
    }
    if (level_best) return make_witness(*level_best);
    at = *best;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Sublevel coverage

enum class CoverageVerdict { covered, not_covered, unresolved };

inline std::string_view to_string(CoverageVerdict v) {
  switch (v) {
    case CoverageVerdict::covered: return "Covered";
    case CoverageVerdict::not_covered: return "NotCovered";
    case CoverageVerdict::unresolved: return "Unresolved";
  }
  return "?";
}

/// Bracket on sup{ dist(x, S) : |f(x)| <= delta }.
struct CoverageResult {
  CoverageVerdict verdict = CoverageVerdict::unresolved;
  RatInterval sup;
  bool empty_sublevel = false;     // no point of the sublevel set exists
  bool budget_exhausted = false;
  std::optional<Rational> witness; // a sublevel point attaining sup.lo()
};

struct CoverageOptions {
  std::uint64_t max_bisections = 1u << 20;
};

namespace detail {

/// Exact max over I of dist(x, S) for sorted S.
inline Rational max_distance_over(const std::vector<Rational>& S, const RatInterval& I) {
  Rational best = std::max(finite_distance(S, I.lo()), finite_distance(S, I.hi()));
  for (std::size_t i = 1; i < S.size(); ++i) {
    const Rational m = midpoint(S[i - 1], S[i]);
    if (I.contains(m)) best = std::max(best, finite_distance(S, m));
  }
  return best;
}

}  // namespace detail

/// Covered when sup.hi() < eps (every point with |f| <= delta is within eps of S);
/// otherwise NotCovered when sup.lo() > eps/2; otherwise Unresolved.
inline CoverageResult sublevel_coverage(const RealFunc& f, const Rational& delta, std::vector<Rational> S,
                                        const Rational& eps, const Rational& tau, const CoverageOptions& opt = {}) {
  require(delta > 0 && eps > 0 && tau > 0, Errc::precondition, "delta, eps and tau must be positive");
  require(!S.empty(), Errc::precondition, "reference set S must be nonempty");
  std::sort(S.begin(), S.end());

  std::optional<Rational> lower;
  std::optional<Rational> witness;
  auto found = [&](const Rational& d, const Rational& x) {
    if (!lower || d > *lower) {
      lower = d;
      witness = x;
    }
  };
  struct Box {
    RatInterval range;
    Rational upper;
  };
  auto below = [](const Box& a, const Box& b) { return a.upper < b.upper; };
  std::priority_queue<Box, std::vector<Box>, decltype(below)> heap(below);

  auto process = [&](const RatInterval& box) {
    const RatInterval enc = tight_enclosure(f, box);
    if (enc.mig() > delta) return;
    for (const Rational& p : {box.lo(), box.hi(), box.mid()})
      if (abs(eval_exact(f, p)) <= delta) found(finite_distance(S, p), p);
    if (enc.mag() <= delta) {
      // whole box is in the sublevel set; the exact max of dist is attained
      const Rational m = detail::max_distance_over(S, box);
      if (!lower || m > *lower) {
        Rational arg = finite_distance(S, box.lo()) == m ? box.lo() : box.hi();
        for (std::size_t i = 1; i < S.size(); ++i) {
          const Rational mid = midpoint(S[i - 1], S[i]);
          if (box.contains(mid) && finite_distance(S, mid) == m) arg = mid;
        }
        found(m, arg);
      }
      return;
    }
    heap.push({box, detail::max_distance_over(S, box)});
  };

  CoverageResult out;
  process(f.domain());
  std::uint64_t bisections = 0;
  Rational upper;
  while (true) {
    if (heap.empty() || (lower && heap.top().upper <= *lower)) {
      if (!lower) {
        out.empty_sublevel = true;
        out.sup = RatInterval(Rational(0));
        out.verdict = CoverageVerdict::covered;
        return out;
      }
      upper = *lower;
      break;
    }
    const Rational lo_now = lower.value_or(Rational(0));
    if (heap.top().upper - lo_now <= tau) {
      upper = heap.top().upper;
      break;
    }
    if (bisections >= opt.max_bisections) {
      upper = heap.top().upper;
      out.budget_exhausted = true;
      break;
    }
    const Box top = heap.top();
    heap.pop();
    ++bisections;
    const Rational m = top.range.mid();
    process({top.range.lo(), m});
    process({m, top.range.hi()});
  }
  out.sup = RatInterval(lower.value_or(Rational(0)), upper);
  out.witness = witness;
  if (out.sup.hi() < eps) out.verdict = CoverageVerdict::covered;
  else if (lower && *lower > eps / 2) out.verdict = CoverageVerdict::not_covered;
  else out.verdict = CoverageVerdict::unresolved;
  return out;
}

}  // namespace zstab
