#pragma once

// Interval halving with a Z-stability stopping decision at each midpoint, the
// naive |f| < tol scan it is contrasted with, and exact real-root isolation
// for rational polynomials (Yun square-free decomposition + Sturm sequences).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zstab/uniformbounds.hpp"

namespace zstab {

// ---------------------------------------------------------------------------
// Stoppers

/// Plain bisection; results are always ExactZero or Bracket.
struct NoStopper {};

/// Pointwise modulus built from a located zero set at each midpoint.
struct PointwiseStopper {
  LocatedZeroSet zeros;
};

/// A uniform claim delta = M(eps); soundness rests on the supplier of M.
struct UniformModulusStopper {
  Modulus modulus;
};

/// A certificate from uniform_modulus; its own eps is the localization radius.
struct CertificateStopper {
  UniformCertificate certificate;
};

using Stopper = std::variant<NoStopper, PointwiseStopper, UniformModulusStopper, CertificateStopper>;

// ---------------------------------------------------------------------------
// Results

enum class Decision { zero, localized, left, right };

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::zero: return "zero";
    case Decision::localized: return "localized";
    case Decision::left: return "left";
    case Decision::right: return "right";
  }
  return "?";
}

struct TraceStep {
  Rational midpoint;
  Decision decision;
};

struct ExactZero {
  Rational x;
};

/// The stopper's evidence that a zero lies within `radius` of `center`.
struct LocalizationCertificate {
  std::string source;  // "pointwise" | "uniform_modulus" | "certificate"
  Rational delta;      // ignored when vacuous
  bool vacuous = false;
  Rational fx_abs;
  std::optional<RatInterval> distance;  // pointwise source only
};

struct Localized {
  Rational center;
  Rational radius;
  LocalizationCertificate certificate;
};

/// f(lo) and f(hi) have exactly opposite signs.
struct Bracket {
  Rational lo;
  Rational hi;
};

struct RootResult {
  std::variant<ExactZero, Localized, Bracket> kind;
  Rational eps;
  std::vector<TraceStep> trace;

  const ExactZero* exact_zero() const { return std::get_if<ExactZero>(&kind); }
  const Localized* localized() const { return std::get_if<Localized>(&kind); }
  const Bracket* bracket() const { return std::get_if<Bracket>(&kind); }
};

namespace detail {

inline int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Applies the stopper at m (f(m) != 0). Returns a certificate when |f(m)| is
/// below the stopper's delta, nullopt when bisection must continue.
inline std::optional<Localized> stop_decision(const RealFunc& f, const Stopper& stopper, const Rational& m,
                                              const Rational& fm, const Rational& eps) {
  const Rational fm_abs = abs(fm);
  return std::visit(
      [&](const auto& s) -> std::optional<Localized> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoStopper>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PointwiseStopper>) {
          PointwiseDelta pd;
          try {
            pd = pointwise_modulus_from_located(f, s.zeros, m, eps);
          } catch (const Error& e) {
            fail(Errc::modulus_failure, std::string("at midpoint ") + to_string(m) + ": " + e.what());
          }
          if (!(fm_abs < pd.delta)) return std::nullopt;
          return Localized{m, eps, {"pointwise", pd.delta, false, fm_abs, pd.distance}};
        } else if constexpr (std::is_same_v<T, UniformModulusStopper>) {
          const Rational delta = s.modulus(eps);
          if (!(delta > 0)) fail(Errc::modulus_failure, "modulus returned a nonpositive delta");
          if (!(fm_abs < delta)) return std::nullopt;
          return Localized{m, eps, {"uniform_modulus", delta, false, fm_abs, std::nullopt}};
        } else {
          const auto& c = s.certificate;
          if (!c.vacuous && !(c.delta > 0)) fail(Errc::modulus_failure, "certificate delta is not positive");
          if (!c.accepts(fm_abs)) return std::nullopt;
          return Localized{m, c.eps, {"certificate", c.delta, c.vacuous, fm_abs, std::nullopt}};
        }
      },
      stopper);
}

}  // namespace detail

/// Interval halving on [lo, hi] with f(lo) f(hi) < 0. At each midpoint m:
/// f(m) = 0 returns ExactZero; |f(m)| below the stopper's delta returns
/// Localized; otherwise the sign-changing half is kept. Stops with a Bracket
/// once the width is at most 2 eps.
inline RootResult zstable_bisect(const RealFunc& f, Rational lo, Rational hi, const Rational& eps,
                                 const Stopper& stopper = NoStopper{}) {
  require(eps > 0, Errc::precondition, "eps must be positive");
  require(lo < hi, Errc::precondition, "lo must be less than hi");
  const int s_lo = detail::sign(eval_exact(f, lo));
  const int s_hi = detail::sign(eval_exact(f, hi));
  require(s_lo * s_hi < 0, Errc::precondition,
          "endpoints do not bracket a sign change: f(lo) f(hi) must be negative");

  RootResult out{Bracket{lo, hi}, eps, {}};
  while (hi - lo > 2 * eps) {
    const Rational m = midpoint(lo, hi);
    const Rational fm = eval_exact(f, m);
    if (fm == 0) {
      out.trace.push_back({m, Decision::zero});
      out.kind = ExactZero{m};
      return out;
    }
    if (auto loc = detail::stop_decision(f, stopper, m, fm, eps)) {
      out.trace.push_back({m, Decision::localized});
      out.kind = std::move(*loc);
      return out;
    }
    if (detail::sign(fm) == s_lo) {
      lo = m;
      out.trace.push_back({m, Decision::right});
    } else {
      hi = m;
      out.trace.push_back({m, Decision::left});
    }
  }
  out.kind = Bracket{lo, hi};
  return out;
}

/// First grid point lo, lo + step, ... with |f(x)| < tol: the naive stopping rule.
inline std::optional<Rational> tolerance_scan(const RealFunc& f, const Rational& tol, const Rational& grid_step) {
  require(tol > 0 && grid_step > 0, Errc::precondition, "tol and grid step must be positive");
  for (Rational x = f.domain().lo(); x <= f.domain().hi(); x += grid_step)
    if (abs(eval_exact(f, x)) < tol) return x;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Real root isolation

/// One isolated root: exact when lo == hi, otherwise the open interval (lo, hi)
/// holds exactly one root and the square-free factor changes sign across it.
struct IsolatedRoot {
  Rational lo;
  Rational hi;
  int multiplicity = 1;
  bool exact() const { return lo == hi; }
};

namespace detail {

inline std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq{p, derivative(p)};
  while (!seq.back().is_zero()) {
    Polynomial r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(Rational(-1) * r);
  }
  return seq;
}

inline int sign_variations(const std::vector<Polynomial>& seq, const Rational& x) {
  int count = 0, prev = 0;
  for (const auto& q : seq) {
    const int s = sign(q(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

/// Number of distinct roots of a square-free p in (a, b].
inline int roots_in(const std::vector<Polynomial>& seq, const Rational& a, const Rational& b) {
  return sign_variations(seq, a) - sign_variations(seq, b);
}

/// Simplest rational (least denominator) in the closed interval [a, b], a <= b.
inline Rational simplest_between(Rational a, Rational b) {
  // Stern-Brocot descent on a continued-fraction expansion.
  Integer fl = numerator(a) / denominator(a);
  if (Rational(fl) > a) fl -= 1;  // floor
  if (Rational(fl) == a) return a;
  if (Rational(fl + 1) <= b) return Rational(fl + 1);
  const Rational inner = simplest_between(Rational(1) / (b - Rational(fl)), Rational(1) / (a - Rational(fl)));
  return Rational(fl) + Rational(1) / inner;
}

inline void isolate_squarefree(const Polynomial& q, int multiplicity, const RatInterval& dom, const Rational& width,
                               std::vector<IsolatedRoot>& out) {
  if (q.degree() == 1) {
    const Rational r = -q.coeffs[0] / q.coeffs[1];
    if (dom.contains(r)) out.push_back({r, r, multiplicity});
    return;
  }
  if (q(dom.lo()) == 0) out.push_back({dom.lo(), dom.lo(), multiplicity});
  const auto seq = sturm_sequence(q);
  struct Span {
    Rational a, b;  // half-open (a, b]
  };
  std::vector<Span> work{{dom.lo(), dom.hi()}};
  while (!work.empty()) {
    Span s = work.back();
    work.pop_back();
    const int n = roots_in(seq, s.a, s.b);
    if (n == 0) continue;
    if (n > 1) {
      const Rational m = midpoint(s.a, s.b);
      work.push_back({m, s.b});
      work.push_back({s.a, m});
      continue;
    }
    // exactly one root in (a, b]
    if (q(s.b) == 0) {
      out.push_back({s.b, s.b, multiplicity});
      continue;
    }
    Rational a = s.a, b = s.b;
    while (q(a) == 0) {  // a is a root belonging to the span on its left
      const Rational m = midpoint(a, b);
      if (roots_in(seq, a, m) == 1) b = m;
      else a = m;
    }
    bool exact = false;
    while (b - a > width) {
      const Rational m = midpoint(a, b);
      const Rational qm = q(m);
      if (qm == 0) {
        out.push_back({m, m, multiplicity});
        exact = true;
        break;
      }
      if (sign(qm) == sign(q(a))) a = m;
      else b = m;
    }
    if (exact) continue;
    const Rational cand = simplest_between(a, b);
    if (q(cand) == 0) out.push_back({cand, cand, multiplicity});
    else out.push_back({a, b, multiplicity});
  }
}

}  // namespace detail

/// Every real root of p in f's domain, each in exactly one returned item of
/// width <= width, sorted. Repeated roots are found through the square-free
/// factors, so even-multiplicity touch points are reported too.
inline std::vector<IsolatedRoot> isolate_real_roots(const RealFunc& p, const Rational& width) {
  const auto* poly = p.as<Polynomial>();
  require(poly != nullptr, Errc::unsupported, "root isolation needs a polynomial");
  require(!poly->is_zero(), Errc::precondition, "zero polynomial has no isolated roots");
  require(width > 0, Errc::precondition, "width must be positive");
  std::vector<IsolatedRoot> out;
  for (const auto& [factor, mult] : squarefree_decomposition(*poly))
    detail::isolate_squarefree(factor, mult, p.domain(), width, out);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

/// The exact roots as a finite located zero set (fails if any root is only bracketed).
inline LocatedZeroSet exact_zero_set(const std::vector<IsolatedRoot>& roots) {
  std::vector<Rational> pts;
  std::vector<int> mult;
  for (const auto& r : roots) {
    require(r.exact(), Errc::precondition, "root near " + to_string(r.lo) + " is not rational");
    pts.push_back(r.lo);
    mult.push_back(r.multiplicity);
  }
  return LocatedZeroSet::finite(std::move(pts), std::move(mult));
}

}  // namespace zstab
