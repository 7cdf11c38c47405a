#pragma once

// Exactly represented real functions on closed rational intervals: exact point
// evaluation, inclusion-isotonic range enclosures, derivatives, spike
// constructions, exact suprema and certified infima of |f|.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "zstab/polynomial.hpp"
#include "zstab/rational.hpp"

namespace zstab {

struct PiecewiseLinear {
  std::vector<Rational> breakpoints;  // strictly increasing
  std::vector<Rational> values;
  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

struct SpikeTerm {
  Rational center;
  Rational halfwidth;
  Rational coefficient;
  friend bool operator==(const SpikeTerm&, const SpikeTerm&) = default;
};

struct SpikeSum {
  std::vector<SpikeTerm> terms;
  friend bool operator==(const SpikeSum&, const SpikeSum&) = default;
};

/// Piecewise constant: values[i] holds on [breakpoints[i], breakpoints[i+1]),
/// the last piece is closed. This is the derivative of a PiecewiseLinear.
struct StepFunction {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;  // one fewer than breakpoints
  friend bool operator==(const StepFunction&, const StepFunction&) = default;
};

class RealFunc;

/// left on [a, b] joined to right on [b, c]; the pieces agree at b.
struct AffineJoin {
  std::shared_ptr<const RealFunc> left;
  std::shared_ptr<const RealFunc> right;
};

class RealFunc {
 public:
  using Rep = std::variant<Polynomial, PiecewiseLinear, SpikeSum, AffineJoin, StepFunction>;

  static RealFunc polynomial(Polynomial p, RatInterval domain) {
    return RealFunc(std::move(p), std::move(domain));
  }

  static RealFunc piecewise_linear(std::vector<Rational> xs, std::vector<Rational> ys) {
    require(xs.size() >= 2, Errc::precondition, "piecewise-linear function needs at least two breakpoints");
    require(xs.size() == ys.size(), Errc::precondition, "breakpoint/value count mismatch");
    for (std::size_t i = 1; i < xs.size(); ++i)
      require(xs[i - 1] < xs[i], Errc::precondition, "breakpoints must be strictly increasing");
    RatInterval dom(xs.front(), xs.back());
    return RealFunc(PiecewiseLinear{std::move(xs), std::move(ys)}, std::move(dom));
  }

  static RealFunc step(std::vector<Rational> xs, std::vector<Rational> vs) {
    require(xs.size() >= 2 && vs.size() + 1 == xs.size(), Errc::precondition, "malformed step function");
    for (std::size_t i = 1; i < xs.size(); ++i)
      require(xs[i - 1] < xs[i], Errc::precondition, "breakpoints must be strictly increasing");
    RatInterval dom(xs.front(), xs.back());
    return RealFunc(StepFunction{std::move(xs), std::move(vs)}, std::move(dom));
  }

  /// Validates positivity of halfwidths and pairwise disjointness of supports
  /// (|z_j - z_k| >= 2 max(d_j, d_k)).
  static RealFunc spike_sum(std::vector<SpikeTerm> terms, RatInterval domain);

  static RealFunc join(const RealFunc& left, const RealFunc& right);

  const Rep& rep() const { return rep_; }
  const RatInterval& domain() const { return domain_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&rep_);
  }

  /// SpikeSum lowered to its exact piecewise-linear form over the domain.
  const PiecewiseLinear* lowered() const { return lowered_.get(); }

  friend bool operator==(const RealFunc& a, const RealFunc& b);

 private:
  RealFunc(Rep rep, RatInterval domain) : rep_(std::move(rep)), domain_(std::move(domain)) {}

  Rep rep_;
  RatInterval domain_;
  std::shared_ptr<const PiecewiseLinear> lowered_;
};

inline bool operator==(const AffineJoin& a, const AffineJoin& b) { return *a.left == *b.left && *a.right == *b.right; }
inline bool operator==(const RealFunc& a, const RealFunc& b) { return a.domain_ == b.domain_ && a.rep_ == b.rep_; }

// ---------------------------------------------------------------------------
// Exact evaluation

namespace detail {

inline Rational spike_value(const Rational& t, const Rational& d, const Rational& x) {
  const Rational r = abs(x - t);
  return r >= d ? Rational(0) : Rational(1 - r / d);
}

inline Rational pl_eval(const PiecewiseLinear& pl, const Rational& x) {
  const auto& xs = pl.breakpoints;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return pl.values.back();
  const auto i = static_cast<std::size_t>(it - xs.begin());
  if (i == 0) return pl.values.front();
  const Rational& x0 = xs[i - 1];
  const Rational& x1 = xs[i];
  if (x == x0) return pl.values[i - 1];
  return pl.values[i - 1] + (pl.values[i] - pl.values[i - 1]) * (x - x0) / (x1 - x0);
}

inline std::size_t step_piece(const StepFunction& s, const Rational& x) {
  auto it = std::upper_bound(s.breakpoints.begin(), s.breakpoints.end(), x);
  auto i = static_cast<std::size_t>(it - s.breakpoints.begin());
  if (i == 0) return 0;
  return std::min(i - 1, s.values.size() - 1);
}

inline void check_in_domain(const RealFunc& f, const Rational& x) {
  require(f.domain().contains(x), Errc::domain,
          "x = " + to_string(x) + " outside domain [" + to_string(f.domain().lo()) + ", " +
              to_string(f.domain().hi()) + "]");
}

inline void check_in_domain(const RealFunc& f, const RatInterval& i) {
  require(f.domain().contains(i), Errc::domain, "interval outside domain");
}

}  // namespace detail

inline Rational eval_exact(const RealFunc& f, const Rational& x) {
  detail::check_in_domain(f, x);
  return std::visit(
      [&](const auto& r) -> Rational {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return r(x);
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          return detail::pl_eval(r, x);
        } else if constexpr (std::is_same_v<T, SpikeSum>) {
          Rational acc = 0;
          for (const auto& s : r.terms) acc += s.coefficient * detail::spike_value(s.center, s.halfwidth, x);
          return acc;
        } else if constexpr (std::is_same_v<T, AffineJoin>) {
          return x <= r.left->domain().hi() ? eval_exact(*r.left, x) : eval_exact(*r.right, x);
        } else {
          return r.values[detail::step_piece(r, x)];
        }
      },
      f.rep());
}

// ---------------------------------------------------------------------------
// Construction helpers

namespace detail {

/// Piecewise-linear interpolant of f through the kinks that fall inside domain
/// plus both domain endpoints. Exact when f is linear between kinks.
template <class F>
PiecewiseLinear pl_through(const RatInterval& domain, std::vector<Rational> kinks, F&& f) {
  kinks.push_back(domain.lo());
  kinks.push_back(domain.hi());
  std::erase_if(kinks, [&](const Rational& k) { return !domain.contains(k); });
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  if (kinks.size() == 1) kinks.push_back(kinks.front());  // degenerate domain
  PiecewiseLinear pl;
  for (const auto& k : kinks) {
    pl.breakpoints.push_back(k);
    pl.values.push_back(f(k));
  }
  return pl;
}

}  // namespace detail

inline RealFunc RealFunc::spike_sum(std::vector<SpikeTerm> terms, RatInterval domain) {
  for (const auto& t : terms)
    require(t.halfwidth > 0, Errc::precondition, "spike halfwidth must be positive");
  std::vector<const SpikeTerm*> sorted;
  for (const auto& t : terms) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->center < b->center; });
  // Adjacent checks suffice: separations add up along the sorted order.
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const Rational gap = sorted[i]->center - sorted[i - 1]->center;
    require(gap >= 2 * std::max(sorted[i]->halfwidth, sorted[i - 1]->halfwidth), Errc::precondition,
            "spike supports overlap near " + to_string(sorted[i]->center));
  }
  std::vector<Rational> kinks;
  for (const auto& t : terms) {
    kinks.push_back(t.center - t.halfwidth);
    kinks.push_back(t.center);
    kinks.push_back(t.center + t.halfwidth);
  }
  auto lowered = detail::pl_through(domain, std::move(kinks), [&](const Rational& x) {
    Rational acc = 0;
    for (const auto& s : terms) acc += s.coefficient * detail::spike_value(s.center, s.halfwidth, x);
    return acc;
  });
  RealFunc f(SpikeSum{std::move(terms)}, std::move(domain));
  f.lowered_ = std::make_shared<const PiecewiseLinear>(std::move(lowered));
  return f;
}

inline RealFunc RealFunc::join(const RealFunc& left, const RealFunc& right) {
  require(left.domain().hi() == right.domain().lo(), Errc::precondition, "joined domains must abut");
  const Rational& b = left.domain().hi();
  require(eval_exact(left, b) == eval_exact(right, b), Errc::precondition,
          "joined pieces disagree at " + to_string(b));
  RatInterval dom(left.domain().lo(), right.domain().hi());
  return RealFunc(AffineJoin{std::make_shared<const RealFunc>(left), std::make_shared<const RealFunc>(right)},
                  std::move(dom));
}

/// Default domain for spike constructions: [0, 1] widened to cover every support.
inline RatInterval spike_domain(const std::vector<SpikeTerm>& terms) {
  Rational lo = 0, hi = 1;
  for (const auto& t : terms) {
    lo = std::min(lo, Rational(t.center - t.halfwidth));
    hi = std::max(hi, Rational(t.center + t.halfwidth));
  }
  return {lo, hi};
}

/// The tent of height 1 at t vanishing outside (t - d, t + d), as a
/// piecewise-linear function clipped to `domain`.
inline RealFunc spike(const Rational& t, const Rational& d, const RatInterval& domain) {
  require(d > 0, Errc::precondition, "spike halfwidth must be positive");
  auto pl = detail::pl_through(domain, {t - d, t, t + d},
                               [&](const Rational& x) { return detail::spike_value(t, d, x); });
  return RealFunc::piecewise_linear(std::move(pl.breakpoints), std::move(pl.values));
}

inline RealFunc spike(const Rational& t, const Rational& d) {
  require(d > 0, Errc::precondition, "spike halfwidth must be positive");
  return spike(t, d, spike_domain({SpikeTerm{t, d, 1}}));
}

inline RealFunc spike_sum(std::vector<SpikeTerm> terms, const RatInterval& domain) {
  return RealFunc::spike_sum(std::move(terms), domain);
}

inline RealFunc spike_sum(std::vector<SpikeTerm> terms) {
  for (const auto& t : terms) require(t.halfwidth > 0, Errc::precondition, "spike halfwidth must be positive");
  auto dom = spike_domain(terms);
  return RealFunc::spike_sum(std::move(terms), dom);
}

/// The exact piecewise-linear form of f, when it has one.
inline std::optional<PiecewiseLinear> as_piecewise_linear(const RealFunc& f) {
  if (auto* pl = f.as<PiecewiseLinear>()) return *pl;
  if (f.as<SpikeSum>()) return *f.lowered();
  if (auto* p = f.as<Polynomial>(); p && p->degree() <= 1) {
    return PiecewiseLinear{{f.domain().lo(), f.domain().hi()}, {(*p)(f.domain().lo()), (*p)(f.domain().hi())}};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derivatives

/// Polynomials differentiate coefficient-wise; piecewise-linear functions
/// (including spike sums) become step functions of their slopes, one-sided at
/// breakpoints.
inline RealFunc derivative(const RealFunc& f) {
  if (auto* p = f.as<Polynomial>()) return RealFunc::polynomial(derivative(*p), f.domain());
  if (f.as<PiecewiseLinear>() || f.as<SpikeSum>()) {
    const PiecewiseLinear pl = *as_piecewise_linear(f);
    std::vector<Rational> slopes;
    for (std::size_t i = 1; i < pl.breakpoints.size(); ++i)
      slopes.push_back((pl.values[i] - pl.values[i - 1]) / (pl.breakpoints[i] - pl.breakpoints[i - 1]));
    return RealFunc::step(pl.breakpoints, std::move(slopes));
  }
  fail(Errc::unsupported, "derivative is defined for polynomial and piecewise-linear functions only");
}

// ---------------------------------------------------------------------------
// Range enclosures

namespace detail {

/// Exact range of a piecewise-linear function over I.
inline RatInterval pl_range(const PiecewiseLinear& pl, const RatInterval& I) {
  Rational lo = pl_eval(pl, I.lo());
  Rational hi = lo;
  auto take = [&](const Rational& v) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };
  take(pl_eval(pl, I.hi()));
  for (std::size_t i = 0; i < pl.breakpoints.size(); ++i)
    if (I.contains(pl.breakpoints[i])) take(pl.values[i]);
  return {lo, hi};
}

inline RatInterval step_range(const StepFunction& s, const RatInterval& I) {
  const std::size_t a = step_piece(s, I.lo());
  const std::size_t b = step_piece(s, I.hi());
  Rational lo = s.values[a], hi = s.values[a];
  for (std::size_t i = a; i <= b; ++i) {
    lo = std::min(lo, s.values[i]);
    hi = std::max(hi, s.values[i]);
  }
  return {lo, hi};
}

/// Power-form natural extension: sum of exact ranges of c_k x^k. Inclusion
/// isotonic, exact on degenerate intervals.
inline RatInterval poly_natural(const Polynomial& p, const RatInterval& I) {
  if (I.degenerate()) return RatInterval(p(I.lo()));
  RatInterval acc(Rational(0));
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    if (p.coeffs[k] == 0) continue;
    acc = acc + p.coeffs[k] * pow(I, static_cast<unsigned>(k));
  }
  return acc;
}

/// Centered (Taylor) form at the midpoint; quadratically convergent but not
/// isotonic, so it is only used intersected with the natural extension.
inline RatInterval poly_centered(const Polynomial& p, const RatInterval& I) {
  const Rational c = I.mid();
  const Rational r = I.width() / 2;
  const Polynomial t = taylor_shift(p, c);
  if (t.is_zero()) return RatInterval(Rational(0));
  Rational lo = t.coeffs[0], hi = t.coeffs[0];
  Rational rk = 1;
  for (std::size_t k = 1; k < t.coeffs.size(); ++k) {
    rk *= r;
    const Rational m = abs(t.coeffs[k]) * rk;
    if (k % 2 == 1) {
      lo -= m;
      hi += m;
    } else if (t.coeffs[k] > 0) {
      hi += m;
    } else {
      lo -= m;
    }
  }
  return {lo, hi};
}

}  // namespace detail

/// Rigorous range enclosure of f over I (I inside the domain). Inclusion
/// isotonic for every variant and exact on degenerate intervals.
inline RatInterval eval_enclosure(const RealFunc& f, const RatInterval& I) {
  detail::check_in_domain(f, I);
  return std::visit(
      [&](const auto& r) -> RatInterval {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return detail::poly_natural(r, I);
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          return detail::pl_range(r, I);
        } else if constexpr (std::is_same_v<T, SpikeSum>) {
          return detail::pl_range(*f.lowered(), I);
        } else if constexpr (std::is_same_v<T, AffineJoin>) {
          const Rational& b = r.left->domain().hi();
          if (I.hi() <= b) return eval_enclosure(*r.left, I);
          if (I.lo() >= b) return eval_enclosure(*r.right, I);
          return hull(eval_enclosure(*r.left, {I.lo(), b}), eval_enclosure(*r.right, {b, I.hi()}));
        } else {
          return detail::step_range(r, I);
        }
      },
      f.rep());
}

/// Tighter enclosure for branch-and-bound: natural extension intersected with
/// the centered form for polynomials; identical to eval_enclosure otherwise.
inline RatInterval tight_enclosure(const RealFunc& f, const RatInterval& I) {
  if (auto* p = f.as<Polynomial>(); p && p->degree() >= 2 && !I.degenerate()) {
    detail::check_in_domain(f, I);
    const RatInterval a = detail::poly_natural(*p, I);
    const RatInterval b = detail::poly_centered(*p, I);
    return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
  }
  if (auto* j = f.as<AffineJoin>()) {
    detail::check_in_domain(f, I);
    const Rational& b = j->left->domain().hi();
    if (I.hi() <= b) return tight_enclosure(*j->left, I);
    if (I.lo() >= b) return tight_enclosure(*j->right, I);
    return hull(tight_enclosure(*j->left, {I.lo(), b}), tight_enclosure(*j->right, {b, I.hi()}));
  }
  return eval_enclosure(f, I);
}

// ---------------------------------------------------------------------------
// Exact supremum

inline Rational sup_exact(const RealFunc& f) {
  if (auto* j = f.as<AffineJoin>()) return std::max(sup_exact(*j->left), sup_exact(*j->right));
  if (auto* s = f.as<StepFunction>()) return *std::max_element(s->values.begin(), s->values.end());
  auto pl = as_piecewise_linear(f);
  require(pl.has_value(), Errc::unsupported, "sup_exact needs a piecewise-linear representation");
  return *std::max_element(pl->values.begin(), pl->values.end());
}

// ---------------------------------------------------------------------------
// Certified infimum of |f| over a finite union of intervals

enum class InfStatus { resolved, empty_region, unresolved };

inline std::string_view to_string(InfStatus s) {
  switch (s) {
    case InfStatus::resolved: return "resolved";
    case InfStatus::empty_region: return "empty_region";
    case InfStatus::unresolved: return "unresolved";
  }
  return "?";
}

/// lower <= inf |f| <= upper; `argmin` is a region point with |f(argmin)| = upper.
/// When status is unresolved the bracket is still sound, only wider than tau.
struct InfBracket {
  InfStatus status = InfStatus::empty_region;
  Rational lower{0};
  Rational upper{0};
  Rational argmin{0};
};

struct InfOptions {
  std::uint64_t max_bisections = 1u << 20;
};

namespace detail {

struct MinAbs {
  Rational value;
  Rational at;
};

/// Exact min of |f| over I for a piecewise-linear function (sign changes give 0).
inline MinAbs pl_min_abs(const PiecewiseLinear& pl, const RatInterval& I) {
  std::vector<Rational> xs{I.lo()};
  for (const auto& b : pl.breakpoints)
    if (I.lo() < b && b < I.hi()) xs.push_back(b);
  if (!I.degenerate()) xs.push_back(I.hi());
  MinAbs best{abs(pl_eval(pl, xs[0])), xs[0]};
  Rational prev = pl_eval(pl, xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Rational v = pl_eval(pl, xs[i]);
    if ((prev < 0 && v > 0) || (prev > 0 && v < 0)) {
      // linear crossing between xs[i-1] and xs[i]
      const Rational root = xs[i - 1] + (xs[i] - xs[i - 1]) * prev / (prev - v);
      return {Rational(0), root};
    }
    if (abs(v) < best.value) best = {abs(v), xs[i]};
    prev = v;
  }
  return best;
}

inline MinAbs step_min_abs(const StepFunction& s, const RatInterval& I) {
  const std::size_t a = step_piece(s, I.lo());
  const std::size_t b = step_piece(s, I.hi());
  MinAbs best{abs(s.values[a]), I.lo()};
  for (std::size_t i = a + 1; i <= b; ++i)
    if (abs(s.values[i]) < best.value) best = {abs(s.values[i]), s.breakpoints[i]};
  return best;
}

struct Box {
  RatInterval range;
  Rational lower;
};
struct BoxAbove {
  bool operator()(const Box& a, const Box& b) const { return a.lower > b.lower; }
};

/// Best-first branch-and-bound on |f| over the intervals; f is any variant.
inline InfBracket bnb_min_abs(const RealFunc& f, const std::vector<RatInterval>& region, const Rational& tau,
                              const InfOptions& opt) {
  std::optional<MinAbs> incumbent;
  auto probe = [&](const Rational& x) {
    const Rational v = abs(eval_exact(f, x));
    if (!incumbent || v < incumbent->value) incumbent = MinAbs{v, x};
  };
  std::priority_queue<Box, std::vector<Box>, BoxAbove> heap;
  for (const auto& I : region) {
    probe(I.lo());
    probe(I.hi());
    probe(I.mid());
  }
  for (const auto& I : region) heap.push({I, tight_enclosure(f, I).mig()});

  std::uint64_t bisections = 0;
  while (true) {
    while (!heap.empty() && heap.top().lower >= incumbent->value) heap.pop();
    if (heap.empty()) return {InfStatus::resolved, incumbent->value, incumbent->value, incumbent->at};
    const Box top = heap.top();
    if (incumbent->value - top.lower <= tau)
      return {InfStatus::resolved, top.lower, incumbent->value, incumbent->at};
    if (bisections >= opt.max_bisections)
      return {InfStatus::unresolved, top.lower, incumbent->value, incumbent->at};
    heap.pop();
    ++bisections;
    const Rational m = top.range.mid();
    probe(m);
    for (RatInterval child : {RatInterval(top.range.lo(), m), RatInterval(m, top.range.hi())}) {
      Rational lo = tight_enclosure(f, child).mig();
      lo = std::max(lo, top.lower);  // the parent's bound also holds on the child
      if (lo < incumbent->value) heap.push({std::move(child), std::move(lo)});
    }
  }
}

inline std::optional<MinAbs> exact_min_abs(const RealFunc& f, const RatInterval& I) {
  if (auto* s = f.as<StepFunction>()) return step_min_abs(*s, I);
  if (auto pl = as_piecewise_linear(f)) return pl_min_abs(*pl, I);
  return std::nullopt;
}

}  // namespace detail

/// Two-sided bracket on inf of |f| over the union of `region` with
/// upper - lower <= tau when resolved. Exact (lower == upper) for
/// piecewise-linear and step functions.
inline InfBracket inf_certified(const RealFunc& f, const std::vector<RatInterval>& region, const Rational& tau,
                                const InfOptions& opt = {}) {
  require(tau > 0, Errc::precondition, "tau must be positive");
  for (const auto& I : region) detail::check_in_domain(f, I);
  if (region.empty()) return {};

  if (auto* j = f.as<AffineJoin>()) {
    const Rational& b = j->left->domain().hi();
    std::vector<RatInterval> left, right;
    for (const auto& I : region) {
      if (I.lo() <= b) left.emplace_back(I.lo(), std::min(I.hi(), b));
      if (I.hi() >= b) right.emplace_back(std::max(I.lo(), b), I.hi());
    }
    InfBracket out;
    bool first = true;
    for (auto* part : {&left, &right}) {
      if (part->empty()) continue;
      const InfBracket br = inf_certified(part == &left ? *j->left : *j->right, *part, tau, opt);
      if (first) {
        out = br;
        first = false;
        continue;
      }
      if (br.upper < out.upper) {
        out.upper = br.upper;
        out.argmin = br.argmin;
      }
      out.lower = std::min(out.lower, br.lower);
      if (br.status == InfStatus::unresolved) out.status = InfStatus::unresolved;
    }
    return out;
  }

  bool exact = true;
  std::optional<detail::MinAbs> best;
  for (const auto& I : region) {
    auto m = detail::exact_min_abs(f, I);
    if (!m) {
      exact = false;
      break;
    }
    if (!best || m->value < best->value) best = std::move(m);
  }
  if (exact) return {InfStatus::resolved, best->value, best->value, best->at};
  return detail::bnb_min_abs(f, region, tau, opt);
}

}  // namespace zstab
