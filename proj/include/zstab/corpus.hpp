#pragma once

// Adversarial and illustrative function families, exactly represented.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zstab/rootfind.hpp"
#include "zstab/zstability.hpp"

namespace zstab {

inline RatInterval default_cubic_domain() { return {make_rational(-3, 4), make_rational(3, 4)}; }

/// x^2 (x - 1/2) - a, i.e. coefficients (-a, 0, -1/2, 1), for 0 <= a < 1/2.
/// f(0) = -a, and for a > 0 there is no zero in [-1/3, 1/3].
inline RealFunc cubic(const Rational& a, const RatInterval& domain = default_cubic_domain()) {
  require(a >= 0 && a < make_rational(1, 2), Errc::precondition, "cubic parameter a must lie in [0, 1/2)");
  return RealFunc::polynomial(Polynomial({Rational(-a), Rational(0), make_rational(-1, 2), Rational(1)}), domain);
}

/// x - 1/2 on [0, 1].
inline RealFunc linear_half() {
  return RealFunc::polynomial(Polynomial({make_rational(-1, 2), Rational(1)}), {Rational(0), Rational(1)});
}

/// Position where the plateau members stop holding their value and fall to 0 at 1.
inline Rational plateau_shoulder() { return make_rational(7, 8); }

namespace detail {

inline PiecewiseLinear plateau_pl(unsigned n, const Rational& floor_center) {
  require(n >= 1, Errc::precondition, "plateau height exponent n must be at least 1");
  require(floor_center > 0 && floor_center < make_rational(1, 2), Errc::precondition,
          "plateau floor center must lie in (0, 1/2)");
  const Rational floor = pow2(-static_cast<long>(n));
  auto g = [&](const Rational& x) { return std::max(floor, abs(x - floor_center)); };
  PiecewiseLinear pl = pl_through({Rational(0), make_rational(1, 2)}, {floor_center - floor, floor_center + floor}, g);
  const Rational top = pl.values.back();
  pl.breakpoints.push_back(plateau_shoulder());
  pl.values.push_back(top);
  pl.breakpoints.push_back(Rational(1));
  pl.values.push_back(Rational(0));
  return pl;
}

}  // namespace detail

/// Positive on [0, 1), zero exactly at 1. On [0, 1/2] it is max(2^-n, |x - c|)
/// (c = floor_center), it holds f(1/2) up to 7/8 and then falls linearly to 0
/// at 1. The inf over [0, 1/2] is 2^-n, so across the family no single delta
/// serves every member at eps = 1/4.
inline RealFunc plateau(unsigned n, const Rational& floor_center = make_rational(1, 4)) {
  auto pl = detail::plateau_pl(n, floor_center);
  return RealFunc::piecewise_linear(std::move(pl.breakpoints), std::move(pl.values));
}

/// plateau(n) continued linearly past 1 to 5/4, where it is negative, so that
/// bisection has a sign change around the zero at 1.
inline RealFunc plateau_signed(unsigned n, const Rational& floor_center = make_rational(1, 4)) {
  auto pl = detail::plateau_pl(n, floor_center);
  const Rational top = pl.values[pl.values.size() - 2];
  pl.breakpoints.push_back(make_rational(5, 4));
  pl.values.push_back(-2 * top);
  return RealFunc::piecewise_linear(std::move(pl.breakpoints), std::move(pl.values));
}

struct SpikeBarrierParams {
  std::vector<Rational> centers;     // z_1..z_K in [0, 1]
  std::vector<Rational> halfwidths;  // d_k <= min(2^-k, d_{k-1}), pairwise separated
};

/// Centers (2k-1)/(2L) and halfwidths min(2^-k, 1/(4L)), L the least power of two >= K.
inline SpikeBarrierParams standard_spike_barrier(unsigned K) {
  require(K >= 1, Errc::precondition, "K must be positive");
  unsigned L = 1;
  while (L < K) L *= 2;
  SpikeBarrierParams p;
  for (unsigned k = 1; k <= K; ++k) {
    p.centers.push_back(make_rational(2 * k - 1, 2 * L));
    p.halfwidths.push_back(std::min(pow2(-static_cast<long>(k)), make_rational(1, 4 * L)));
  }
  return p;
}

/// sum over k of (1 - 2^-k) s(z_k, d_k, .) on [0, 1].
inline RealFunc spike_barrier_sum(const SpikeBarrierParams& p) {
  const std::size_t K = p.centers.size();
  require(K >= 1 && p.halfwidths.size() == K, Errc::precondition, "need K >= 1 centers and halfwidths");
  const RatInterval unit(Rational(0), Rational(1));
  std::vector<SpikeTerm> terms;
  for (std::size_t k = 1; k <= K; ++k) {
    const Rational& d = p.halfwidths[k - 1];
    require(d > 0, Errc::precondition, "halfwidths must be positive");
    require(d <= pow2(-static_cast<long>(k)), Errc::precondition, "halfwidth d_k must not exceed 2^-k");
    if (k > 1) require(d <= p.halfwidths[k - 2], Errc::precondition, "halfwidths must be nonincreasing");
    require(unit.contains(p.centers[k - 1]), Errc::precondition, "spike centers must lie in [0, 1]");
    terms.push_back({p.centers[k - 1], d, 1 - pow2(-static_cast<long>(k))});
  }
  return spike_sum(std::move(terms), unit);
}

/// g = 1 - spike_barrier_sum: positive, equal to 1 off the supports, inf 2^-K at z_K.
inline RealFunc spike_barrier(const SpikeBarrierParams& p) {
  const RealFunc f = spike_barrier_sum(p);
  PiecewiseLinear pl = *f.lowered();
  for (auto& v : pl.values) v = 1 - v;
  return RealFunc::piecewise_linear(std::move(pl.breakpoints), std::move(pl.values));
}

/// z_k = 1/k with tail_sep(n, [c, d]) = max(0, c - 1/(n+1)) (and -d when d < 0).
inline LocatedZeroSet reciprocal_zeros() {
  EnumeratedZeros e;
  e.name = "reciprocal";
  e.term = [](std::uint64_t k) { return Rational(Integer(1), Integer(k)); };
  e.tail_sep = [](std::uint64_t n, const RatInterval& X) {
    if (X.hi() < 0) return Rational(-X.hi());
    const Rational largest_tail(Integer(1), Integer(n) + 1);
    return std::max(Rational(0), Rational(X.lo() - largest_tail));
  };
  return LocatedZeroSet::enumerated(std::move(e));
}

// ---------------------------------------------------------------------------
// Registry

struct CorpusMember {
  std::string family;
  std::map<std::string, std::string> params;  // canonical parameter strings
  RealFunc function;
  std::optional<FiniteZeros> known_zeros;  // exact zeros in the domain, when rational
  std::optional<Rational> known_inf;       // exact inf of f over the domain, when known
  std::string role;
};

struct CorpusFamily {
  std::string name;
  std::vector<std::string> params;
  std::string description;
};

inline std::vector<CorpusFamily> corpus_families() {
  return {
      {"cubic", {"a"}, "x^2(x-1/2)-a on [-3/4,3/4]; not Z-stable at 0 uniformly in a"},
      {"linear", {}, "x-1/2 on [0,1]"},
      {"plateau", {"n"}, "positive on [0,1), zero at 1, inf over [0,1/2] equal to 2^-n"},
      {"plateau-signed", {"n"}, "plateau continued to [0,5/4] with a sign change at 1"},
      {"spike-barrier", {"K"}, "1 - sum (1-2^-k) s(z_k,d_k,.) with standard centers; inf 2^-K"},
  };
}

namespace detail {

inline const std::string& param(const std::map<std::string, std::string>& p, const std::string& key) {
  auto it = p.find(key);
  require(it != p.end(), Errc::precondition, "missing parameter '" + key + "'");
  return it->second;
}

inline unsigned parse_count(const std::string& s, const std::string& key) {
  require(!s.empty() && s.size() < 10 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }),
          Errc::parse, "parameter '" + key + "' must be a nonnegative integer");
  return static_cast<unsigned>(std::stoul(s));
}

}  // namespace detail

inline CorpusMember make_member(const std::string& family, const std::map<std::string, std::string>& params) {
  for (const auto& fam : corpus_families()) {
    if (fam.name != family) continue;
    for (const auto& [k, v] : params)
      require(std::find(fam.params.begin(), fam.params.end(), k) != fam.params.end(), Errc::precondition,
              "unknown parameter '" + k + "' for family " + family);
  }
  if (family == "cubic") {
    const Rational a = parse_rational(detail::param(params, "a"));
    CorpusMember m{family, {{"a", to_string(a)}}, cubic(a), std::nullopt, std::nullopt, "cubic counterexample family"};
    auto roots = isolate_real_roots(m.function, pow2(-30));
    if (std::all_of(roots.begin(), roots.end(), [](const auto& r) { return r.exact(); })) {
      FiniteZeros z;
      for (const auto& r : roots) {
        z.points.push_back(r.lo);
        z.multiplicities.push_back(r.multiplicity);
      }
      m.known_zeros = std::move(z);
    }
    return m;
  }
  if (family == "linear")
    return {family, {}, linear_half(), FiniteZeros{{make_rational(1, 2)}, {1}}, Rational(0), "linear reference"};
  if (family == "plateau" || family == "plateau-signed") {
    const unsigned n = detail::parse_count(detail::param(params, "n"), "n");
    const bool signed_variant = family == "plateau-signed";
    RealFunc f = signed_variant ? plateau_signed(n) : plateau(n);
    std::optional<Rational> inf;
    if (!signed_variant) inf = Rational(0);
    return {family, {{"n", std::to_string(n)}}, std::move(f), FiniteZeros{{Rational(1)}, {1}}, inf,
            signed_variant ? "sign-extended non-uniform stability surrogate" : "non-uniform stability surrogate"};
  }
  if (family == "spike-barrier") {
    const unsigned K = detail::parse_count(detail::param(params, "K"), "K");
    return {family, {{"K", std::to_string(K)}}, spike_barrier(standard_spike_barrier(K)), FiniteZeros{},
            pow2(-static_cast<long>(K)), "positive function with inf 2^-K"};
  }
  fail(Errc::precondition, "unknown corpus family '" + family + "'");
}

}  // namespace zstab
