#pragma once

// Moduli as data, located zero sets, the pointwise modulus combinator for
// well-behaved functions with located zero sets, and the contrapositive
// (well-behavedness) reading of a uniform modulus.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zstab/realfunc.hpp"

namespace zstab {

// ---------------------------------------------------------------------------
// Moduli

struct FormulaModulus {
  Rational gamma;
  unsigned m = 1;  // delta = gamma * (eps/2)^m
  friend bool operator==(const FormulaModulus&, const FormulaModulus&) = default;
};

struct TableEntry {
  Rational eps;
  Rational delta;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct CertifiedEntry {
  Rational eps;
  Rational delta;
  std::string certificate;  // reference to the certificate backing the entry
  friend bool operator==(const CertifiedEntry&, const CertifiedEntry&) = default;
};

struct TableModulus {
  std::vector<TableEntry> entries;
  friend bool operator==(const TableModulus&, const TableModulus&) = default;
};

struct CertifiedModulus {
  std::vector<CertifiedEntry> entries;
  friend bool operator==(const CertifiedModulus&, const CertifiedModulus&) = default;
};

/// A monotone eps -> delta map. `at` is set for a pointwise modulus and empty
/// for a uniform one.
class Modulus {
 public:
  using Rep = std::variant<FormulaModulus, TableModulus, CertifiedModulus>;

  static Modulus uniform(Rep rep) { return Modulus(std::move(rep), std::nullopt); }
  static Modulus pointwise(Rep rep, Rational at) { return Modulus(std::move(rep), std::move(at)); }

  const Rep& rep() const { return rep_; }
  bool is_uniform() const { return !at_.has_value(); }
  const std::optional<Rational>& at() const { return at_; }

  /// delta for tolerance eps. Tables answer with the entry of largest eps' <= eps.
  Rational operator()(const Rational& eps) const {
    require(eps > 0, Errc::precondition, "eps must be positive");
    if (auto* f = std::get_if<FormulaModulus>(&rep_)) return f->gamma * pow(Rational(eps / 2), f->m);
    auto lookup = [&](const auto& entries) -> Rational {
      const auto* best = static_cast<const std::decay_t<decltype(entries[0])>*>(nullptr);
      for (const auto& e : entries)
        if (e.eps <= eps) best = &e;
      require(best != nullptr, Errc::precondition, "no tabulated tolerance at or below " + to_string(eps));
      return best->delta;
    };
    if (auto* t = std::get_if<TableModulus>(&rep_)) return lookup(t->entries);
    return lookup(std::get<CertifiedModulus>(rep_).entries);
  }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  Modulus(Rep rep, std::optional<Rational> at) : rep_(std::move(rep)), at_(std::move(at)) { validate(); }

  void validate() const {
    if (auto* f = std::get_if<FormulaModulus>(&rep_)) {
      require(f->gamma > 0, Errc::precondition, "gamma must be positive");
      require(f->m >= 1, Errc::precondition, "exponent m must be positive");
      return;
    }
    auto check = [](const auto& entries) {
      require(!entries.empty(), Errc::precondition, "modulus table is empty");
      for (std::size_t i = 0; i < entries.size(); ++i) {
        require(entries[i].eps > 0 && entries[i].delta > 0, Errc::precondition, "modulus entries must be positive");
        if (i == 0) continue;
        require(entries[i - 1].eps < entries[i].eps, Errc::precondition, "tabulated eps must strictly increase");
        require(entries[i - 1].delta <= entries[i].delta, Errc::precondition, "delta must be nondecreasing in eps");
      }
    };
    if (auto* t = std::get_if<TableModulus>(&rep_)) check(t->entries);
    else check(std::get<CertifiedModulus>(rep_).entries);
  }

  Rep rep_;
  std::optional<Rational> at_;
};

// ---------------------------------------------------------------------------
// Located zero sets

struct FiniteZeros {
  std::vector<Rational> points;
  std::vector<int> multiplicities;
  friend bool operator==(const FiniteZeros&, const FiniteZeros&) = default;
};

/// A one-one enumeration z_1, z_2, ... with a tail-separation bound:
/// tail_sep(n, X) <= inf over m > n of dist(z_m, X), nondecreasing in n.
struct EnumeratedZeros {
  std::string name;
  std::function<Rational(std::uint64_t)> term;  // k >= 1
  std::function<Rational(std::uint64_t, const RatInterval&)> tail_sep;
};

class LocatedZeroSet {
 public:
  using Rep = std::variant<FiniteZeros, EnumeratedZeros>;

  static LocatedZeroSet finite(std::vector<Rational> points, std::vector<int> multiplicities = {}) {
    if (multiplicities.empty()) multiplicities.assign(points.size(), 1);
    require(multiplicities.size() == points.size(), Errc::precondition, "multiplicity count mismatch");
    for (int m : multiplicities) require(m >= 1, Errc::precondition, "multiplicities must be positive");
    return LocatedZeroSet(FiniteZeros{std::move(points), std::move(multiplicities)});
  }
  static LocatedZeroSet enumerated(EnumeratedZeros e) { return LocatedZeroSet(std::move(e)); }

  const Rep& rep() const { return rep_; }
  const FiniteZeros* finite_zeros() const { return std::get_if<FiniteZeros>(&rep_); }
  const EnumeratedZeros* enumerated_zeros() const { return std::get_if<EnumeratedZeros>(&rep_); }
  bool empty() const { return finite_zeros() && finite_zeros()->points.empty(); }

 private:
  explicit LocatedZeroSet(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Exact distance from x to a nonempty finite point set.
inline Rational finite_distance(const std::vector<Rational>& points, const Rational& x) {
  require(!points.empty(), Errc::uninhabited_zero_set, "distance to an empty zero set");
  Rational best = abs(x - points.front());
  for (const auto& z : points) best = std::min(best, abs(x - z));
  return best;
}

struct DistanceOptions {
  std::uint64_t max_prefix = std::uint64_t{1} << 24;
};

/// Bracket on dist(x, Z) of width <= precision; exact for finite sets.
inline RatInterval located_distance(const LocatedZeroSet& Z, const Rational& x, const Rational& precision,
                                    const DistanceOptions& opt = {}) {
  require(precision > 0, Errc::precondition, "precision must be positive");
  if (auto* fz = Z.finite_zeros()) return RatInterval(finite_distance(fz->points, x));
  const auto& ez = *Z.enumerated_zeros();
  const RatInterval at(x);
  Rational prefix_min = abs(x - ez.term(1));
  std::uint64_t n = 1;
  while (true) {
    const Rational lower = std::min(prefix_min, ez.tail_sep(n, at));
    if (prefix_min - lower <= precision) return {lower, prefix_min};
    if (n >= opt.max_prefix) fail(Errc::budget_exhausted, "distance bracket did not reach requested precision");
    const std::uint64_t next = n * 2;
    for (std::uint64_t k = n + 1; k <= next; ++k) prefix_min = std::min(prefix_min, abs(x - ez.term(k)));
    n = next;
  }
}

// ---------------------------------------------------------------------------
// Pointwise modulus from a located zero set

enum class ProximityCase { near, far };

inline std::string_view to_string(ProximityCase c) { return c == ProximityCase::near ? "near" : "far"; }

/// Near: dist(x, Z) < eps is certified, so delta = 1 works trivially.
/// Far: dist(x, Z) > 0 is certified and delta = |f(x)| > 0, which makes the
/// antecedent |f(x)| < delta false.
struct PointwiseDelta {
  Rational delta;
  ProximityCase proximity = ProximityCase::near;
  RatInterval distance;
  Rational fx_abs;

  /// Re-checks the certificate exactly against eps.
  bool sound_for(const Rational& eps) const {
    if (proximity == ProximityCase::near) return delta == 1 && distance.hi() < eps;
    return distance.lo() > 0 && delta == fx_abs && delta > 0;
  }
};

inline PointwiseDelta pointwise_modulus_from_located(const RealFunc& f, const LocatedZeroSet& Z, const Rational& x,
                                                     const Rational& eps, const DistanceOptions& opt = {}) {
  require(eps > 0, Errc::precondition, "eps must be positive");
  require(!Z.empty(), Errc::uninhabited_zero_set, "pointwise modulus needs an inhabited zero set");
  const Rational fx_abs = abs(eval_exact(f, x));
  // Refine the distance bracket until one side of "dist < eps or dist > 0" is certified.
  Rational precision = eps;
  const Rational floor = pow2(-64);
  while (true) {
    const RatInterval d = located_distance(Z, x, precision, opt);
    if (d.hi() < eps) return {Rational(1), ProximityCase::near, d, fx_abs};
    if (d.lo() > 0) {
      if (fx_abs == 0)
        fail(Errc::well_behavedness_violation,
             "f(" + to_string(x) + ") = 0 at positive distance from the declared zero set");
      return {fx_abs, ProximityCase::far, d, fx_abs};
    }
    if (precision < floor) fail(Errc::modulus_failure, "distance bracket unresolved against eps at " + to_string(x));
    precision /= 2;
  }
}

// ---------------------------------------------------------------------------
// Contrapositive reading of a uniform modulus

/// "every x with dist(x, Z) >= eps has |f(x)| >= delta"
struct WellBehavedClaim {
  Rational eps;
  Rational delta;
};

inline WellBehavedClaim wellbehaved_lower_bound(const Modulus& M, const Rational& eps) {
  require(eps > 0, Errc::precondition, "eps must be positive");
  require(M.is_uniform(), Errc::precondition, "well-behavedness bound needs a uniform modulus");
  return {eps, M(eps)};
}

struct GridViolation {
  Rational x;
  Rational distance_lower;  // certified positive
};

/// Scans lo, lo + step, ... <= hi and reports every point at certified positive
/// distance from Z where f vanishes exactly.
inline std::vector<GridViolation> check_well_behaved_on_grid(const RealFunc& f, const LocatedZeroSet& Z,
                                                             const Rational& grid_step) {
  require(grid_step > 0, Errc::precondition, "grid step must be positive");
  std::vector<GridViolation> out;
  for (Rational x = f.domain().lo(); x <= f.domain().hi(); x += grid_step) {
    Rational dist_lo = 1;  // empty Z: every point is bounded away from it
    if (!Z.empty()) {
      const RatInterval d = located_distance(Z, x, grid_step);
      if (d.lo() <= 0) continue;
      dist_lo = d.lo();
    }
    if (eval_exact(f, x) == 0) out.push_back({x, dist_lo});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Falsification witnesses

/// Exact refutation of a uniform claim (eps, delta): |f(x)| < delta while
/// dist(x, Z) >= eps.
struct FalsificationWitness {
  Rational x;
  Rational fx_abs;
  Rational dist_lower;
  Rational delta;
  Rational eps;

  bool verify(const RealFunc& f, const LocatedZeroSet& Z) const {
    if (!f.domain().contains(x)) return false;
    if (abs(eval_exact(f, x)) != fx_abs || !(fx_abs < delta)) return false;
    const RatInterval d = located_distance(Z, x, eps / 4);
    return dist_lower <= d.lo() && dist_lower >= eps;
  }

  friend bool operator==(const FalsificationWitness&, const FalsificationWitness&) = default;
};

}  // namespace zstab
