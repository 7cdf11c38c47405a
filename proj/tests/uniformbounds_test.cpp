#include "test_util.hpp"

using namespace zstab;
using zt::Q;

namespace {

const Rational kTau = pow2(-20);

LocatedZeroSet one() { return LocatedZeroSet::finite({Q(1)}); }

}  // namespace

TEST(ExclusionRegion, DomainMinusOpenBalls) {
  const auto K = exclusion_region({Q(0), Q(1)}, {Q(1, 2)}, Q(1, 8));
  ASSERT_EQ(K.size(), 2u);
  EXPECT_EQ(K[0], RatInterval(Q(0), Q(3, 8)));
  EXPECT_EQ(K[1], RatInterval(Q(5, 8), Q(1)));
  EXPECT_TRUE(exclusion_region({Q(0), Q(1)}, {Q(1, 2)}, Q(1)).empty());
  // touching balls leave the shared boundary point
  const auto T = exclusion_region({Q(0), Q(1)}, {Q(1, 4), Q(3, 4)}, Q(1, 4));
  ASSERT_EQ(T.size(), 3u);
  EXPECT_EQ(T[1], RatInterval(Q(1, 2)));
}

TEST(UniformModulus, LinearExample) {
  const auto c = uniform_modulus(linear_half(), LocatedZeroSet::finite({Q(1, 2)}), Q(1, 4), kTau);
  EXPECT_EQ(c.delta, Q(1, 8));
  ASSERT_EQ(c.K.size(), 2u);
  EXPECT_EQ(c.K[0], RatInterval(Q(0), Q(3, 8)));
  EXPECT_EQ(c.K[1], RatInterval(Q(5, 8), Q(1)));
  EXPECT_FALSE(c.vacuous);
}

TEST(UniformModulus, PlateauExample) {
  const auto c = uniform_modulus(plateau(10), one(), Q(1, 4), kTau);
  EXPECT_EQ(c.delta, pow2(-10));
  ASSERT_EQ(c.K.size(), 1u);
  EXPECT_EQ(c.K[0], RatInterval(Q(0), Q(7, 8)));
}

TEST(UniformModulus, CubicWithinTau) {
  const auto c = uniform_modulus(cubic(0), LocatedZeroSet::finite({Q(0), Q(1, 2)}), Q(1, 4), kTau);
  EXPECT_LE(c.delta, Q(3, 512));
  EXPECT_GE(c.delta, Q(3, 512) - kTau);
  EXPECT_LE(c.delta, c.inf_bracket.lower);
}

TEST(UniformModulus, ErrorsAndVacuousCase) {
  try {
    uniform_modulus(plateau(3), LocatedZeroSet::finite({}), Q(1, 4), kTau);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::uninhabited_zero_set);
  }
  // the declared set misses the double zero at 0
  try {
    uniform_modulus(cubic(0), LocatedZeroSet::finite({Q(1, 2)}), Q(1, 4), kTau);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cannot_certify);
  }
  const auto v = uniform_modulus(linear_half(), LocatedZeroSet::finite({Q(1, 2)}), Q(2), kTau);
  EXPECT_TRUE(v.vacuous);
  EXPECT_TRUE(v.K.empty());
  EXPECT_TRUE(v.accepts(Q(1000)));
}

TEST(UniformModulus, ContrapositiveOnGrid) {
  // no grid point at distance >= eps has |f| < delta
  const std::vector<std::pair<RealFunc, std::vector<Rational>>> cases{
      {cubic(0), {Q(0), Q(1, 2)}}, {linear_half(), {Q(1, 2)}}, {plateau(6), {Q(1)}}, {plateau_signed(6), {Q(1)}}};
  for (const auto& [f, zs] : cases) {
    const auto Z = LocatedZeroSet::finite(zs);
    for (const auto& eps : {Q(1, 2), Q(1, 4), Q(1, 8)}) {
      const auto c = uniform_modulus(f, Z, eps, kTau);
      for (const auto& x : zt::grid(f.domain(), pow2(-10)))
        if (finite_distance(zs, x) >= eps) ASSERT_GE(abs(eval_exact(f, x)), c.delta) << to_string(x);
    }
  }
}

TEST(PolyUniformModulus, Examples) {
  EXPECT_EQ(poly_uniform_modulus({{Q(1), Q(0)}, {Q(-1), Q(0)}}, Q(1), Q(1, 2)), Q(1, 16));
  EXPECT_EQ(poly_uniform_modulus({{Q(0), Q(1)}, {Q(0), Q(-1)}}, Q(1), Q(1, 2)), Q(1, 16));
  EXPECT_EQ(poly_uniform_modulus({{Q(3, 7), Q(1, 5)}}, Q(1), Q(1, 3)), Q(1, 6));
  EXPECT_THROW(poly_uniform_modulus({}, Q(1), Q(1, 2)), Error);
  EXPECT_THROW(poly_uniform_modulus({{Q(0), Q(0)}}, Q(0), Q(1, 2)), Error);
}

TEST(PolyUniformModulus, ContractOnGaussianGrid) {
  // p(z) = z^2 + 1: every grid z with |p(z)| < delta lies within eps of +-i
  const PolyFactorization pf{{{Q(0), Q(1)}, {Q(0), Q(-1)}}, Q(1)};
  const Rational eps = Q(1, 2);
  const Rational delta = poly_uniform_modulus(pf.roots, pf.gamma, eps);
  int hits = 0;
  for (const auto& re : zt::grid({Q(-2), Q(2)}, Q(1, 64)))
    for (const auto& im : zt::grid({Q(-2), Q(2)}, Q(1, 64))) {
      const ComplexRational z{re, im};
      const ComplexRational p = z * z + ComplexRational{Q(1), Q(0)};
      ASSERT_EQ(p.norm2(), pf.product_abs2(z));
      if (!(p.norm2() < delta * delta)) continue;
      ++hits;
      EXPECT_TRUE((z - pf.roots[0]).norm2() < eps * eps || (z - pf.roots[1]).norm2() < eps * eps);
    }
  EXPECT_GT(hits, 0);
}

TEST(PolyboundTrials, SmallSeededRunHasNoViolations) {
  PolyboundOptions opt;
  opt.trials = 10;
  opt.hits_per_instance = 200;
  const auto s = run_polybound_trials(opt);
  EXPECT_EQ(s.instances, 20u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_GE(s.min_hits, 200u);
  const auto again = run_polybound_trials(opt);
  EXPECT_EQ(again.samples, s.samples);
}

TEST(Falsify, PlateauExamples) {
  const auto r = falsify_uniform(plateau(10), one(), Q(1, 4), pow2(-9));
  ASSERT_EQ(r.status, FalsifyStatus::found);
  EXPECT_EQ(r.witness->x, Q(1, 4));
  EXPECT_EQ(r.witness->fx_abs, pow2(-10));
  EXPECT_EQ(r.witness->dist_lower, Q(3, 4));
  EXPECT_TRUE(r.witness->verify(plateau(10), one()));

  const auto s = falsify_uniform(plateau(10), one(), Q(1, 4), pow2(-10));
  EXPECT_EQ(s.status, FalsifyStatus::survived);
  EXPECT_FALSE(s.witness.has_value());
  EXPECT_GT(s.points_evaluated, 0u);
}

TEST(Falsify, RejectsNonPositiveDelta) {
  EXPECT_THROW(falsify_uniform(plateau(4), one(), Q(1, 4), Q(0)), Error);
  EXPECT_THROW(falsify_uniform(plateau(4), one(), Q(0), Q(1, 4)), Error);
}

TEST(Falsify, DefeatsInflatedCertificates) {
  // doubling a correct delta on the plateau family must be caught
  for (unsigned n = 2; n <= 12; ++n) {
    const auto c = uniform_modulus(plateau(n), one(), Q(1, 4), kTau);
    const auto r = falsify_uniform(plateau(n), one(), Q(1, 4), 2 * c.delta);
    ASSERT_EQ(r.status, FalsifyStatus::found) << n;
    EXPECT_TRUE(r.witness->verify(plateau(n), one()));
  }
}

TEST(Coverage, Examples) {
  const auto nc = sublevel_coverage(plateau(10), pow2(-9), {Q(1)}, Q(1, 4), pow2(-12));
  EXPECT_EQ(nc.verdict, CoverageVerdict::not_covered);
  EXPECT_GE(nc.sup.hi(), Q(3, 4));
  EXPECT_GE(nc.sup.lo(), Q(3, 4) - pow2(-12));
  ASSERT_TRUE(nc.witness.has_value());
  EXPECT_LE(abs(eval_exact(plateau(10), *nc.witness)), pow2(-9));

  const auto cv = sublevel_coverage(cubic(0), Q(1, 1024), {Q(0), Q(1, 2)}, Q(1, 4), pow2(-12));
  EXPECT_EQ(cv.verdict, CoverageVerdict::covered);
  EXPECT_LT(cv.sup.hi(), Q(1, 4));

  const RealFunc c1 = RealFunc::polynomial(Polynomial({Q(1)}), {Q(0), Q(1)});
  const auto vac = sublevel_coverage(c1, Q(1, 2), {Q(0)}, Q(1, 4), pow2(-12));
  EXPECT_EQ(vac.verdict, CoverageVerdict::covered);
  EXPECT_TRUE(vac.empty_sublevel);
  EXPECT_EQ(vac.sup, RatInterval(Q(0)));
}

TEST(Coverage, ShrinkingDeltaKeepsCovered) {
  const std::vector<Rational> S{Q(0), Q(1, 2)};
  for (const auto& delta : {Q(1, 256), Q(1, 1024), Q(1, 4096), pow2(-16)}) {
    const auto r = sublevel_coverage(cubic(0), delta, S, Q(1, 4), pow2(-12));
    EXPECT_EQ(r.verdict, CoverageVerdict::covered) << to_string(delta);
  }
}

TEST(Coverage, SupBracketAgainstGridOracle) {
  // sup of dist to S over {|f| <= delta}: grid points give a lower bound
  const RealFunc f = plateau(4);
  const Rational delta = Q(1, 8);
  const auto r = sublevel_coverage(f, delta, {Q(1)}, Q(1, 4), pow2(-12));
  Rational grid_sup = 0;
  for (const auto& x : zt::grid(f.domain(), pow2(-10)))
    if (abs(eval_exact(f, x)) <= delta) grid_sup = std::max(grid_sup, Rational(1 - x));
  EXPECT_LE(grid_sup, r.sup.hi());
  EXPECT_LE(r.sup.width(), pow2(-12));
}
