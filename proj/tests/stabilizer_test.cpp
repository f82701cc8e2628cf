#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "linkcharge/error.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/sampling.hpp"
#include "linkcharge/stabilizer.hpp"

namespace linkcharge {
namespace {

const double kPhi = std::numbers::phi;

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

Configuration regular_pentagon() {
  return reconstruct_pentagon(Linkage::equilateral(5), kPhi, kPhi).configuration;
}

TEST(StabilizeQuad, SquareNeedsEqualCharges) {
  const Linkage l = Linkage::equilateral(4);
  const Configuration sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const auto r = stabilize_quad(l, sq);
  EXPECT_NEAR(r.t, 1.0, 1e-12);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(StabilizeQuad, RhombusFamilyNeedsEqualCharges) {
  const Linkage l = Linkage::equilateral(4);
  const Interval r = quad_convex_range(l);
  for (int i = 1; i < 10; ++i) {
    const auto c = reconstruct_quad(l, r.lo + r.width() * i / 10.0).configuration;
    const auto s = stabilize_quad(l, c);
    const QuadCurvePoint psi = quad_psi(c);
    // Along x + y = 4: t = (y/x)^{3/2}.
    EXPECT_NEAR(s.t, std::pow(psi.y / psi.x, 1.5), 1e-10);
  }
}

TEST(StabilizeQuad, AgreesWithOneDimensionalStationaritySolve) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Linkage l = random_linkage(rng, 4);
    if (quad_convex_range(l).empty()) continue;
    const Configuration c = random_convex_quad(rng, l, 0.02);
    const auto s = stabilize_quad(l, c);
    ASSERT_GT(s.t, 0.0);
    ASSERT_LE(s.residual, 1e-8);
    // Independent oracle: t making the centred difference of E in d13 vanish.
    const double e0 = distance(c[0], c[2]);
    const double h = 1e-5;
    auto f = [&](double e) {
      const auto q = reconstruct_quad(l, e).configuration;
      return distance(q[1], q[3]);
    };
    const double de = (1.0 / (e0 + h) - 1.0 / (e0 - h)) / (2 * h);
    const double df = (1.0 / f(e0 + h) - 1.0 / f(e0 - h)) / (2 * h);
    ASSERT_NEAR(s.t, -de / df, 1e-6 * s.t);
  }
}

TEST(StabilizeQuad, RejectsNonconvex) {
  const Linkage l = Linkage::equilateral(4);
  const Configuration bent{{{0, 0}, {1, 0}, {0.2, 0.3}, {0, 1}}};
  EXPECT_EQ(error_of([&] { stabilize_quad(linkage_of(bent), bent); }), ErrorCode::NotConvex);
}

TEST(PentagonJacobian, MatchesFiniteDifferences) {
  Rng rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto s = random_convex_pentagon(rng, l, 0.05);
    const auto j = pentagon_jacobian(s.configuration);
    auto b = [&](double b2, double b4) {
      const auto x = placement::pentagon_diagonals(placement::pentagon(l.pentagon_sides(), b2, b4, 1e-12));
      return std::array<double, 3>{std::sqrt(x[4]), std::sqrt(x[2]), std::sqrt(x[0])};
    };
    const double h = 1e-6;
    const auto p4 = b(s.b2, s.b4 + h), m4 = b(s.b2, s.b4 - h);
    const auto p2 = b(s.b2 + h, s.b4), m2 = b(s.b2 - h, s.b4);
    const std::array<double, 6> fd{(p4[0] - m4[0]) / (2 * h), (p4[1] - m4[1]) / (2 * h), (p4[2] - m4[2]) / (2 * h),
                                   (p2[0] - m2[0]) / (2 * h), (p2[1] - m2[1]) / (2 * h), (p2[2] - m2[2]) / (2 * h)};
    const std::array<double, 6> got{j.alpha1, j.beta1, j.gamma1, j.alpha2, j.beta2, j.gamma2};
    for (int i = 0; i < 6; ++i) ASSERT_NEAR(got[i], fd[i], 1e-6 * std::max(1.0, std::abs(fd[i]))) << trial << " " << i;
  }
}

TEST(PentagonJacobian, RegularPentagonSigns) {
  // Lengthening A3A5 with A1A3 fixed swings A5 away from A2.
  const auto j = pentagon_jacobian(regular_pentagon());
  EXPECT_NEAR(j.gamma1, 1.0 / kPhi, 1e-12);
  EXPECT_LT(j.gamma2, 0.0);
  EXPECT_LT(j.gamma1 * j.gamma2, 0.0);
  const auto aligned = reconstruct_pentagon(Linkage::equilateral(5), 2.0, 1.5).configuration;
  EXPECT_EQ(error_of([&] { pentagon_jacobian(aligned); }), ErrorCode::BoundaryConfiguration);
}

TEST(StabilizePentagon, RegularPentagonNeedsUnitCharges) {
  const auto r = stabilize_pentagon(regular_pentagon(), 1, 1, 1);
  EXPECT_NEAR(r.s, 1.0, 1e-12);
  EXPECT_NEAR(r.t, 1.0, 1e-12);
  EXPECT_LT(r.other_root, 0.0);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(StabilizePentagon, RandomConvexPentagons) {
  Rng rng(33);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    const double q1 = u(rng), q2 = u(rng), q4 = u(rng);
    const auto c = stabilizer_coefficients(p, q1, q2, q4);
    ASSERT_LT(c.A * c.C, 0.0);
    const auto r = stabilize_pentagon(p, q1, q2, q4);
    ASSERT_GT(r.s, 0.0);
    ASSERT_GT(r.t, 0.0);
    ASSERT_LT(r.other_root, 0.0);
    ASSERT_LE(r.residual, 1e-8) << trial;
    ASSERT_LE(rank_system(p, r.charges).max_abs_minor(), 1e-8);
  }
}

TEST(StabilizePentagon, RoundTripThroughTheMinimum) {
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    const auto r = stabilize_pentagon(p, 1, 1, 1);
    ASSERT_LT(vertex_distance(global_min_convex(l, r.charges).configuration, p), 1e-6) << trial;
  }
}

TEST(StabilizePentagon, OtherPlacementsByRelabelling) {
  Rng rng(35);
  const Linkage l = random_linkage(rng, 5);
  const auto p = random_convex_pentagon(rng, l).configuration;
  const ChargeVector fixed({1.3, 0.7, 0, 1.1, 0});
  const auto standard = stabilize_pentagon(p, fixed, 2, 4);
  const auto direct = stabilize_pentagon(p, 1.3, 0.7, 1.1);
  EXPECT_NEAR(standard.s, direct.s, 1e-12);
  EXPECT_NEAR(standard.t, direct.t, 1e-12);
  for (auto [tv, sv] : {std::pair{0, 2}, {1, 3}, {3, 0}, {4, 1}, {2, 0}, {4, 2}}) {
    const auto r = stabilize_pentagon(p, ChargeVector({1, 1, 1, 1, 1}), tv, sv);
    EXPECT_NEAR(r.charges[tv], r.t, 1e-15);
    EXPECT_NEAR(r.charges[sv], r.s, 1e-15);
    EXPECT_LE(stationarity_residual(p, r.charges), 1e-8);
  }
  EXPECT_EQ(error_of([&] { stabilize_pentagon(p, fixed, 2, 3); }), ErrorCode::AdjacentControlCharges);
}

TEST(StabilizePentagon, RejectsNonconvexAndAligned) {
  const Configuration bent{{{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}};
  EXPECT_EQ(error_of([&] { stabilize_pentagon(bent, 1, 1, 1); }), ErrorCode::NotConvex);
  const auto aligned = reconstruct_pentagon(Linkage::equilateral(5), 2.0, 1.5).configuration;
  EXPECT_EQ(error_of([&] { stabilize_pentagon(aligned, 1, 1, 1); }), ErrorCode::BoundaryConfiguration);
}

TEST(StabilizePentagon, NoSecondPositiveChargePair) {
  Rng rng(36);
  for (int trial = 0; trial < 5; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    const auto r = stabilize_pentagon(p, 1, 1, 1);
    const double smax = 4.0 * std::max({r.s, r.t, 1.0});
    for (int i = 1; i <= 200; ++i)
      for (int j = 1; j <= 200; ++j) {
        const double s = smax * i / 200.0, t = smax * j / 200.0;
        if (std::hypot(s - r.s, t - r.t) < 2 * smax / 200.0) continue;
        ASSERT_GT(stationarity_residual(p, pentagon_charges(1, 1, 1, s, t)), 1e-8);
      }
  }
}

TEST(StabilizePentagon, ChargesVaryContinuouslyAlongAPath) {
  const Linkage l = Linkage::equilateral(5);
  const ConvexRegion region(l);
  const double k = region.k_at(0.5);
  const Interval r = region.b2_range(k);
  double prev_s = NAN, prev_t = NAN;
  for (int i = 1; i < 200; ++i) {
    const auto p = reconstruct_pentagon(l, r.lo + r.width() * (0.1 + 0.8 * i / 200.0), k).configuration;
    const auto sol = stabilize_pentagon(p, 1, 1, 1);
    if (i > 1) {
      EXPECT_LT(std::abs(sol.s - prev_s), 0.1 * std::max(1.0, sol.s));
      EXPECT_LT(std::abs(sol.t - prev_t), 0.1 * std::max(1.0, sol.t));
    }
    prev_s = sol.s;
    prev_t = sol.t;
  }
}

TEST(RankSystem, NonStabilizingChargesLeaveAMinor) {
  Rng rng(37);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    const ChargeVector q({u(rng), u(rng), u(rng), u(rng), u(rng)});
    const auto rs = rank_system(p, q);
    ASSERT_EQ(rs.rows.size(), 4u);
    ASSERT_EQ(rs.minors.size(), 5u);
    // Minors vanish exactly when the stationarity residual does.
    ASSERT_EQ(rs.max_abs_minor() > 1e-8, stationarity_residual(p, q) > 1e-8);
  }
}

TEST(RankSystem, QuadrilateralConeHasBothSigns) {
  const Linkage l({1.0, 0.8, 0.9, 0.7});
  Rng rng(38);
  for (int trial = 0; trial < 100; ++trial) {
    const Configuration c = random_convex_quad(rng, l, 0.02);
    const QuadRankForm f = quad_rank_form(c);
    ASSERT_LT(f.a * f.b, 0.0);
    const auto t = stabilize_quad(l, c).t;
    // Critical charges (1, t, 1, 1) lie on the cone; scaling q2 q4 off it flips the sign.
    EXPECT_NEAR(f.a + f.b * t, 0.0, 1e-9 * std::abs(f.a));
    const auto below = rank_system(c, ChargeVector({1, 0.5 * t, 1, 1})).minors[0];
    const auto above = rank_system(c, ChargeVector({1, 2.0 * t, 1, 1})).minors[0];
    ASSERT_LT(below * above, 0.0);
  }
}

TEST(Bezout, Bounds) {
  EXPECT_EQ(bezout_bound(4), 2);
  EXPECT_EQ(bezout_bound(5), 4);
  EXPECT_EQ(error_of([] { bezout_bound(3); }), ErrorCode::InvalidArgument);
}

TEST(MixedSign, NeverCritical) {
  EXPECT_TRUE(mixed_sign_noncritical(regular_pentagon(), 1, 1, 1, 1, -1));
  EXPECT_TRUE(mixed_sign_noncritical(regular_pentagon(), 1, 1, 1, -1, 1));
  EXPECT_EQ(error_of([] { mixed_sign_noncritical(regular_pentagon(), 1, 1, 1, 1, 1); }), ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace linkcharge
