#include "test_util.hpp"

using namespace zstab;
using zt::Q;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::parse;
}

}  // namespace

TEST(LocatedDistance, FiniteExamples) {
  const auto Z = LocatedZeroSet::finite({Q(0), Q(1, 2)});
  EXPECT_EQ(located_distance(Z, Q(3, 8), Q(1, 1024)), RatInterval(Q(1, 8)));
  EXPECT_EQ(located_distance(Z, Q(1, 2), Q(1, 1024)), RatInterval(Q(0)));
  EXPECT_EQ(code_of([] { located_distance(LocatedZeroSet::finite({}), Q(0), Q(1)); }), Errc::uninhabited_zero_set);
}

TEST(LocatedDistance, FiniteMatchesBruteForce) {
  const std::vector<Rational> pts{Q(-3, 7), Q(1, 9), Q(2, 5), Q(5, 3)};
  const auto Z = LocatedZeroSet::finite(pts);
  for (const auto& x : zt::samples({Q(-2), Q(3)}, 300)) {
    Rational best = abs(x - pts[0]);
    for (const auto& p : pts) best = std::min(best, abs(x - p));
    EXPECT_EQ(located_distance(Z, x, Q(1, 3)), RatInterval(best));
  }
}

TEST(LocatedDistance, ReciprocalEnumerationAtZero) {
  const auto Z = reciprocal_zeros();
  const Rational prec = pow2(-10);
  const RatInterval d = located_distance(Z, Q(0), prec);
  EXPECT_TRUE(d.contains(Q(0)));
  EXPECT_LE(d.width(), prec);
  // away from the accumulation point the bracket pins the true distance
  const RatInterval e = located_distance(Z, Q(3, 10), pow2(-20));
  EXPECT_TRUE(e.contains(Q(1, 3) - Q(3, 10)));
  EXPECT_LE(e.width(), pow2(-20));
}

TEST(PointwiseModulus, PlateauFarAndNear) {
  const RealFunc f = plateau(10);
  const auto Z = LocatedZeroSet::finite({Q(1)});
  const auto far = pointwise_modulus_from_located(f, Z, Q(1, 4), Q(1, 4));
  EXPECT_EQ(far.proximity, ProximityCase::far);
  EXPECT_EQ(far.delta, pow2(-10));
  EXPECT_TRUE(far.sound_for(Q(1, 4)));
  const auto near = pointwise_modulus_from_located(f, Z, Q(15, 16), Q(1, 4));
  EXPECT_EQ(near.proximity, ProximityCase::near);
  EXPECT_EQ(near.delta, 1);
  EXPECT_TRUE(near.sound_for(Q(1, 4)));
  const auto member = pointwise_modulus_from_located(f, Z, Q(1), Q(1, 1000));
  EXPECT_EQ(member.proximity, ProximityCase::near);
  EXPECT_EQ(member.delta, 1);
}

TEST(PointwiseModulus, ImplicationHoldsOnGrid) {
  // |f(x)| < delta => dist(x, Z) < eps, checked in each case
  const RealFunc f = cubic(0);
  const auto Z = LocatedZeroSet::finite({Q(0), Q(1, 2)});
  for (const auto& eps : {Q(1, 4), Q(1, 16)})
    for (const auto& x : zt::grid(f.domain(), Q(1, 64))) {
      const auto pd = pointwise_modulus_from_located(f, Z, x, eps);
      ASSERT_TRUE(pd.sound_for(eps));
      if (abs(eval_exact(f, x)) < pd.delta) EXPECT_LT(finite_distance({Q(0), Q(1, 2)}, x), eps);
    }
}

TEST(PointwiseModulus, WrongZeroSetIsWellBehavednessViolation) {
  const auto Z = LocatedZeroSet::finite({Q(1, 2)});
  EXPECT_EQ(code_of([&] { pointwise_modulus_from_located(cubic(0), Z, Q(0), Q(1, 8)); }),
            Errc::well_behavedness_violation);
}

TEST(PointwiseModulus, EnumeratedRefinesUntilResolved) {
  const RealFunc f = RealFunc::polynomial(Polynomial({Q(1)}), {Q(0), Q(1)});
  const auto pd = pointwise_modulus_from_located(f, reciprocal_zeros(), Q(3, 10), Q(1, 30));
  EXPECT_EQ(pd.proximity, ProximityCase::far);
  EXPECT_TRUE(pd.distance.contains(Q(1, 30)));
}

TEST(Modulus, FormulaAndTables) {
  const auto M = Modulus::uniform(FormulaModulus{Q(1), 2});
  EXPECT_EQ(M(Q(1, 2)), Q(1, 16));
  EXPECT_EQ(wellbehaved_lower_bound(M, Q(1, 2)).delta, Q(1, 16));
  EXPECT_THROW(wellbehaved_lower_bound(M, Q(0)), Error);

  const auto T = Modulus::uniform(TableModulus{{{Q(1, 8), Q(1, 100)}, {Q(1, 4), Q(1, 50)}, {Q(1, 2), Q(1, 50)}}});
  EXPECT_EQ(T(Q(1, 4)), Q(1, 50));
  EXPECT_EQ(T(Q(3, 16)), Q(1, 100));
  EXPECT_EQ(T(Q(5)), Q(1, 50));
  EXPECT_THROW(T(Q(1, 16)), Error);

  EXPECT_THROW(Modulus::uniform(TableModulus{{{Q(1, 4), Q(1, 10)}, {Q(1, 8), Q(1, 20)}}}), Error);
  EXPECT_THROW(Modulus::uniform(TableModulus{{{Q(1, 8), Q(1, 10)}, {Q(1, 4), Q(1, 20)}}}), Error);
  EXPECT_THROW(Modulus::uniform(TableModulus{{{Q(1, 8), Q(0)}}}), Error);
}

TEST(Modulus, MonotoneInEps) {
  const auto M = Modulus::uniform(FormulaModulus{Q(3, 4), 3});
  const auto T = certified_modulus(cubic(0), LocatedZeroSet::finite({Q(0), Q(1, 2)}),
                                   {Q(1, 16), Q(1, 8), Q(1, 4), Q(1, 2)}, pow2(-16));
  std::vector<Rational> eps;
  for (int k = 1; k <= 64; ++k) eps.push_back(Q(k, 64));
  for (std::size_t i = 1; i < eps.size(); ++i) {
    EXPECT_LE(M(eps[i - 1]), M(eps[i]));
    if (eps[i - 1] >= Q(1, 16)) EXPECT_LE(T(eps[i - 1]), T(eps[i]));
  }
}

TEST(WellBehaved, PlateauSpotCheck) {
  const auto Z = LocatedZeroSet::finite({Q(1)});
  const auto M = certified_modulus(plateau(10), Z, {Q(1, 4)}, pow2(-20));
  const auto claim = wellbehaved_lower_bound(M, Q(1, 4));
  EXPECT_EQ(claim.delta, pow2(-10));
  EXPECT_GE(finite_distance({Q(1)}, Q(1, 4)), claim.eps);
  EXPECT_GE(abs(eval_exact(plateau(10), Q(1, 4))), claim.delta);
}

TEST(WellBehavedGrid, Examples) {
  EXPECT_TRUE(check_well_behaved_on_grid(cubic(0), LocatedZeroSet::finite({Q(0), Q(1, 2)}), pow2(-8)).empty());
  const auto v = check_well_behaved_on_grid(cubic(0), LocatedZeroSet::finite({Q(1, 2)}), pow2(-8));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].x, 0);
  const RealFunc one = RealFunc::polynomial(Polynomial({Q(1)}), {Q(0), Q(1)});
  EXPECT_TRUE(check_well_behaved_on_grid(one, LocatedZeroSet::finite({}), pow2(-6)).empty());
}

TEST(Witness, VerifyRejectsTamperedFields) {
  const auto Z = LocatedZeroSet::finite({Q(1)});
  const RealFunc f = plateau(10);
  const FalsificationWitness w{Q(1, 4), pow2(-10), Q(3, 4), pow2(-9), Q(1, 4)};
  EXPECT_TRUE(w.verify(f, Z));
  auto bad = w;
  bad.delta = pow2(-10);
  EXPECT_FALSE(bad.verify(f, Z));
  bad = w;
  bad.dist_lower = Q(7, 8);
  EXPECT_FALSE(bad.verify(f, Z));
  bad = w;
  bad.x = Q(15, 16);
  EXPECT_FALSE(bad.verify(f, Z));
}
