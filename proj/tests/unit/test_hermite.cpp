#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "elspline/hermite.hpp"
#include "oracles.hpp"

using namespace elspline;

namespace {

constexpr double kD = 1.19814023473559220743992249228;

double cylinder_distance(ParamInterval a, ParamInterval b) {
  double best = INFINITY;
  for (int k = -1; k <= 1; ++k) {
    const double s = k * kTwoPi;
    best = std::min(best, std::max(std::abs(a.t1 - b.t1 + s), std::abs(a.t2 - b.t2 + s)));
  }
  return best;
}

ChordAngles residual(ParamInterval iv, ChordAngles target) {
  const ChordAngles q = chord_angles(iv);
  return {normalize_angle(q.alpha - target.alpha), normalize_angle(q.beta - target.beta)};
}

}  // namespace

TEST(InvertQ, RecoversForwardPreimage) {
  const ParamInterval iv{-0.9, 0.4};
  const ParamInterval got = invert_q(chord_angles(iv));
  EXPECT_NEAR(cylinder_distance(got, iv), 0.0, 1e-10);
}

TEST(InvertQ, RoundTripOnGrid) {
  for (int i = 0; i < 21; ++i) {
    for (int j = 0; j < 21; ++j) {
      const ChordAngles a{-kHalfPi + kPi * i / 20, -kHalfPi + kPi * j / 20};
      if (is_origin(a) || uturn_corner(a) != 0) continue;
      const ParamInterval iv = invert_q(a);
      const ChordAngles r = residual(iv, a);
      ASSERT_LE(std::abs(r.alpha), 1e-10) << a.alpha << " " << a.beta;
      ASSERT_LE(std::abs(r.beta), 1e-10) << a.alpha << " " << a.beta;
      EXPECT_TRUE(in_region_u(iv));
      EXPECT_GE(iv.t1, -kPi);
      EXPECT_LT(iv.t1, kPi);
    }
  }
}

TEST(InvertQ, RandomInputsIncludingTinyAngles) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kHalfPi, kHalfPi);
  std::uniform_real_distribution<double> e(-12.0, 0.0);
  for (int i = 0; i < 3000; ++i) {
    ChordAngles a{u(rng), u(rng)};
    if (i % 3 == 0) {
      const double s = std::pow(10.0, e(rng));
      a = {a.alpha * s, a.beta * s};
    }
    if (is_origin(a) || uturn_corner(a) != 0) continue;
    const InversionResult inv = invert_q_detailed(a);
    const ChordAngles r = residual(inv.iv, a);
    ASSERT_LE(std::max(std::abs(r.alpha), std::abs(r.beta)), 1e-10) << a.alpha << " " << a.beta;
    ASSERT_TRUE(in_region_u(inv.iv));
  }
}

TEST(InvertQ, ExcludedInputs) {
  try {
    (void)invert_q({0.0, 0.0});
    FAIL() << "expected DomainError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  EXPECT_THROW((void)invert_q({2.0, 0.0}), Error);
  EXPECT_THROW((void)invert_q({kHalfPi, -kHalfPi}), Error);
}

TEST(InvertQ, EmpiricalInjectivityOverU) {
  // forward images on a 200x200 grid over U; distant cells must not collide
  constexpr int n = 200;
  constexpr double bucket = 1e-3;
  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  std::vector<ParamInterval> ivs;
  std::vector<ChordAngles> imgs;
  for (int i = 0; i < n; ++i) {
    const double t1 = -kPi + (i + 0.5) * kTwoPi / n;
    const double top = u_upper(t1);
    for (int k = 0; k < n; ++k) {
      const ParamInterval iv{t1, t1 + (k + 0.5) / n * (top - t1)};
      const ChordAngles a = chord_angles(iv);
      if (std::hypot(a.alpha, a.beta) < 0.05) continue;  // the whole diagonal collapses onto the origin
      buckets[{std::lround(a.alpha / bucket), std::lround(a.beta / bucket)}].push_back(ivs.size());
      ivs.push_back(iv);
      imgs.push_back(a);
    }
  }
  int collisions = 0;
  for (std::size_t p = 0; p < ivs.size(); ++p) {
    const long ba = std::lround(imgs[p].alpha / bucket);
    const long bb = std::lround(imgs[p].beta / bucket);
    for (long da = -1; da <= 1; ++da)
      for (long db = -1; db <= 1; ++db) {
        auto it = buckets.find({ba + da, bb + db});
        if (it == buckets.end()) continue;
        for (std::size_t q : it->second) {
          if (q <= p) continue;
          // near the origin Q flattens toward the diagonal; shrink the radius quadratically inside |Q| < 0.3
          const double r = std::min(std::hypot(imgs[p].alpha, imgs[p].beta), std::hypot(imgs[q].alpha, imgs[q].beta));
          const double radius = 1e-3 * std::min(1.0, (r / 0.3) * (r / 0.3));
          if (std::hypot(imgs[p].alpha - imgs[q].alpha, imgs[p].beta - imgs[q].beta) > radius) continue;
          if (cylinder_distance(ivs[p], ivs[q]) > 0.05) ++collisions;
        }
      }
  }
  EXPECT_EQ(collisions, 0);
}

TEST(EnergyE1, SpecialValues) {
  EXPECT_EQ(energy_e1({0.0, 0.0}), 0.0);
  EXPECT_NEAR(energy_e1({kHalfPi, -kHalfPi}), kD * kD, 1e-11);
  EXPECT_NEAR(energy_e1({-kHalfPi, kHalfPi}), kD * kD, 1e-11);
  EXPECT_THROW((void)energy_e1({1.7, 0.0}), Error);
}

TEST(EnergyE1, Symmetries) {
  const double e = energy_e1({0.5, -0.2});
  EXPECT_NEAR(e, energy_e1({-0.2, 0.5}), 1e-10);
  EXPECT_NEAR(e, energy_e1({-0.5, 0.2}), 1e-10);
}

TEST(EnergyE1, AgreesWithOracleEnergyAtPreimage) {
  for (ChordAngles a : {ChordAngles{0.7, 0.1}, ChordAngles{-1.2, 0.9}, ChordAngles{1.5, 1.5}, ChordAngles{0.3, -1.4}}) {
    const ParamInterval iv = invert_q(a);
    const oracle::Angles q = oracle::chord_angles(iv.t1, iv.t2);
    EXPECT_NEAR(q.alpha, a.alpha, 1e-10);
    EXPECT_NEAR(q.beta, a.beta, 1e-10);
    EXPECT_NEAR(energy_e1(a), oracle::normalized_energy(iv.t1, iv.t2), 1e-12);
  }
}

TEST(EnergyE1, SmallAngleAsymptotics) {
  for (double s : {1e-2, 1e-3, 1e-4}) {
    for (ChordAngles dir : {ChordAngles{1.0, 0.3}, ChordAngles{-0.4, 1.0}, ChordAngles{0.8, -0.8}}) {
      const ChordAngles a{dir.alpha * s, dir.beta * s};
      const double q = oracle::small_angle_energy(a.alpha, a.beta);
      EXPECT_NEAR(energy_e1(a) / q, 1.0, 5.0 * s) << s;
    }
  }
}

TEST(EnergyE1, ContinuousAtUTurnCorner) {
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    EXPECT_NEAR(energy_e1({kHalfPi - eps, -kHalfPi}), kD * kD, 10.0 * eps);
    EXPECT_NEAR(energy_e1({kHalfPi, -kHalfPi + eps}), kD * kD, 10.0 * eps);
  }
  EXPECT_NEAR(energy_e1({kHalfPi - 1e-6, -kHalfPi + 1e-6}), kD * kD, 1e-4);
}

TEST(GradE1, OriginAndCorners) {
  const EnergyGradient g = grad_e1({0.0, 0.0});
  EXPECT_EQ(g.d_alpha, 0.0);
  EXPECT_EQ(g.d_beta, 0.0);
  try {
    (void)grad_e1({kHalfPi, -kHalfPi});
    FAIL() << "expected DomainError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(GradE1, MatchesFiniteDifferencesAtReferencePoint) {
  const ChordAngles a{0.7, 0.1};
  const EnergyGradient g = grad_e1(a);
  const double h = 1e-5;
  const double fa = oracle::central_difference([&](double x) { return energy_e1({x, a.beta}); }, a.alpha, h);
  const double fb = oracle::central_difference([&](double x) { return energy_e1({a.alpha, x}); }, a.beta, h);
  EXPECT_NEAR(g.d_alpha, fa, 1e-5 * std::abs(g.d_alpha));
  EXPECT_NEAR(g.d_beta, fb, 1e-5 * std::abs(g.d_beta));
}

TEST(GradE1, HalfTheEndCurvatures) {
  const SCurve c = optimal_scurve({{0.0, 0.0}, 0.7}, {{1.0, 0.0}, 0.1});
  const EnergyGradient g = grad_e1({0.7, 0.1});
  EXPECT_NEAR(g.d_alpha, -0.5 * c.kappa_start, 1e-13);
  EXPECT_NEAR(g.d_beta, 0.5 * c.kappa_end, 1e-13);
}

TEST(BetaStar, ZeroOfBetaDerivativeFromTAlphaConstruction) {
  const double alpha = 0.9;
  const double tb = constants().t_bar;
  // alpha(-t, 0) increases from 0 on (0, t_bar]; find t_alpha by bisection
  double lo = 1e-9;
  double hi = tb;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chord_angles({-mid, 0.0}).alpha < alpha)
      lo = mid;
    else
      hi = mid;
  }
  const double t_alpha = 0.5 * (lo + hi);
  const double beta_star = chord_angles({-t_alpha, 0.0}).beta;
  EXPECT_NEAR(locate_beta_star(alpha), beta_star, 1e-10);
  EXPECT_NEAR(grad_e1({alpha, beta_star}).d_beta, 0.0, 1e-10);
  EXPECT_NEAR(locate_beta_star(-alpha), -beta_star, 1e-10);
  EXPECT_EQ(locate_beta_star(0.0), 0.0);
}

TEST(BetaStar, BoundedByComplementOfPsi) {
  const double bound = kHalfPi - constants().psi;
  for (int i = 0; i < 13; ++i) {
    const double alpha = -kHalfPi + kPi * i / 12;
    EXPECT_LE(std::abs(locate_beta_star(alpha)), bound + 1e-9) << alpha;
  }
  EXPECT_NEAR(std::abs(locate_beta_star(kHalfPi)), bound, 1e-9);
}

TEST(OptimalSCurve, LineSegment) {
  const SCurve c = optimal_scurve({{0.0, 0.0}, 0.0}, {{1.0, 0.0}, 0.0});
  EXPECT_EQ(c.kind, SCurveKind::LineSegment);
  EXPECT_EQ(c.energy, 0.0);
  EXPECT_EQ(c.kappa_start, 0.0);
  EXPECT_EQ(c.kappa_end, 0.0);
  EXPECT_FALSE(c.params.has_value());
  const Point mid = c.point_at(0.5);
  EXPECT_NEAR(mid.x, 0.5, 1e-15);
}

TEST(OptimalSCurve, UTurn) {
  const SCurve c = optimal_scurve({{0.0, 0.0}, kHalfPi}, {{1.0, 0.0}, -kHalfPi});
  EXPECT_EQ(c.kind, SCurveKind::UTurnArc);
  EXPECT_NEAR(c.energy, kD * kD, 1e-11);
  ASSERT_TRUE(c.params.has_value());
  EXPECT_EQ(c.params->t1, -kPi);
  EXPECT_EQ(c.params->t2, 0.0);
  const Point end = c.point_at(c.params->t2);
  EXPECT_NEAR(end.x, 1.0, 1e-12);
  EXPECT_NEAR(end.y, 0.0, 1e-12);
  const SCurve m = optimal_scurve({{0.0, 0.0}, -kHalfPi}, {{1.0, 0.0}, kHalfPi});
  EXPECT_EQ(m.kind, SCurveKind::UTurnArc);
  EXPECT_EQ(m.params->t1, 0.0);
  EXPECT_EQ(m.params->t2, kPi);
}

TEST(OptimalSCurve, SymmetricInputGivesSymmetricParameters) {
  const SCurve c = optimal_scurve({{0.0, 0.0}, 0.6}, {{1.0, 0.0}, 0.6});
  ASSERT_TRUE(c.params.has_value());
  EXPECT_NEAR(c.params->t1, -c.params->t2, 1e-12);
  EXPECT_NEAR(c.kappa_start, -c.kappa_end, 1e-12);
}

TEST(OptimalSCurve, Errors) {
  EXPECT_THROW((void)optimal_scurve({{0.0, 0.0}, 0.0}, {{0.0, 0.0}, 0.0}), Error);
  try {
    (void)optimal_scurve({{0.0, 0.0}, 2.0}, {{1.0, 0.0}, 0.0});
    FAIL() << "expected DomainError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(OptimalSCurve, ScaleLawAndReconstruction) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-kHalfPi, kHalfPi);
  for (int i = 0; i < 1000; ++i) {
    const Point p{pos(rng), pos(rng)};
    Point q{pos(rng), pos(rng)};
    if (norm(q - p) < 1e-3) q = p + Point{1.0, 0.0};
    const double phi = direction(q - p);
    const ChordAngles a{ang(rng), ang(rng)};
    const UnitTangent u{p, normalize_angle(phi + a.alpha)};
    const UnitTangent v{q, normalize_angle(phi + a.beta)};
    const SCurve c = optimal_scurve(u, v);
    const double L = norm(q - p);
    ASSERT_NEAR(c.energy, energy_e1(chord_angles_of(u, v)) / L, 1e-10 * std::max(1.0, c.energy));
    if (!c.params) continue;
    const Point s = c.point_at(c.params->t1);
    const Point e = c.point_at(c.params->t2);
    ASSERT_LE(norm(s - p), 1e-9 * L);
    ASSERT_LE(norm(e - q), 1e-9 * L);
    ASSERT_LE(std::abs(normalize_angle(c.tangent_direction_at(c.params->t1) - u.direction)), 1e-9);
    ASSERT_LE(std::abs(normalize_angle(c.tangent_direction_at(c.params->t2) - v.direction)), 1e-9);
    ASSERT_NEAR(c.kappa_start, c.curvature_at(c.params->t1), 1e-9 / L);
    ASSERT_NEAR(c.kappa_end, c.curvature_at(c.params->t2), 1e-9 / L);
  }
}

TEST(CrossCheckGamma, ReferenceCase) {
  const HermiteDiagnostics d = cross_check_gamma({1.2, 0.3});
  EXPECT_LE(std::abs(d.sigma_residual), 1e-8);
  EXPECT_LE(std::abs(d.g_gamma_value - energy_e1({1.2, 0.3})), 1e-8);
}

TEST(CrossCheckGamma, EqualAnglesGammaInLowerQuarter) {
  const HermiteDiagnostics d = cross_check_gamma({0.5, 0.5});
  EXPECT_GT(d.gamma_hat, -kHalfPi);
  EXPECT_LT(d.gamma_hat, 0.0);
  EXPECT_LE(std::abs(d.sigma_residual), 1e-8);
}

TEST(CrossCheckGamma, ReductionAndNotApplicable) {
  // (-0.3, -1.2) reduces to (1.2, 0.3)
  const HermiteDiagnostics d = cross_check_gamma({-0.3, -1.2});
  EXPECT_LE(std::abs(d.sigma_residual), 1e-8);
  EXPECT_THROW((void)cross_check_gamma({0.0, 0.0}), Error);
  try {
    (void)cross_check_gamma({kHalfPi, -kHalfPi});
    FAIL() << "expected NotApplicable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApplicable);
  }
}

TEST(Regions, StaircaseAndClassification) {
  const double tb = constants().t_bar;
  EXPECT_EQ(u_upper(-3.0), 0.0);
  EXPECT_EQ(u_upper(-0.5 * tb), tb);
  EXPECT_EQ(u_upper(0.1), kPi);
  EXPECT_EQ(u_upper(kPi - 0.5 * tb), kPi + tb);
  EXPECT_EQ(classify_region({-2.0, -1.0}), URegion::U0);
  EXPECT_EQ(classify_region({-1.0, 1.0}), URegion::U1);
  EXPECT_EQ(classify_region({0.5, 2.0}), URegion::U2);
  EXPECT_EQ(classify_region({2.5, 3.5}), URegion::U3);
  EXPECT_TRUE(in_region_u({-0.9, 0.4}));
  EXPECT_TRUE(in_region_u({-2.0, 0.5}));
  EXPECT_FALSE(in_region_u({-2.5, 0.5}));
  const ParamInterval f = fundamental({5.0, 6.0});
  EXPECT_NEAR(f.t1, 5.0 - kTwoPi, 1e-15);
}
