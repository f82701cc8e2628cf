#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "linkcharge/error.hpp"
#include "linkcharge/moduli.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/region.hpp"
#include "linkcharge/sampling.hpp"

namespace linkcharge {
namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

Configuration regular_pentagon() {
  // Unit sides, counterclockwise, first edge along +x.
  std::vector<Point2> v;
  Point2 p{0, 0};
  for (int i = 0; i < 5; ++i) {
    v.push_back(p);
    const double a = 2.0 * std::numbers::pi * i / 5.0;
    p = p + Point2{std::cos(a), std::sin(a)};
  }
  return Configuration{v};
}

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

TEST(Linkage, RejectsInvalidSides) {
  EXPECT_EQ(error_of([] { Linkage({10, 1, 1, 1, 1}); }), ErrorCode::InvalidLinkage);
  EXPECT_EQ(error_of([] { Linkage({1, -1, 1, 1, 1}); }), ErrorCode::InvalidLinkage);
  EXPECT_EQ(error_of([] { Linkage({1, 1, 1}); }), ErrorCode::InvalidLinkage);
  EXPECT_NO_THROW(Linkage({1, 1, 1, 1, 1}));
}

TEST(Linkage, FlagsSingularModuli) {
  EXPECT_FALSE(is_nongeneric(Linkage::equilateral(5)));
  // 1 + 1 + 1 - 1.5 - 1.5 = 0: a collinear configuration exists.
  EXPECT_TRUE(is_nongeneric(Linkage({1, 1, 1, 1.5, 1.5})));
  // The equilateral quadrilateral folds flat.
  EXPECT_TRUE(is_nongeneric(Linkage::equilateral(4)));
}

TEST(Canonicalize, SquareIsFixedAndTranslationInvariant) {
  const Configuration sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  EXPECT_LT(vertex_distance(canonicalize(sq.vertices), sq), 1e-15);
  std::vector<Point2> moved;
  for (const auto& p : sq.vertices) moved.push_back(p + Point2{3, 7});
  EXPECT_LT(vertex_distance(canonicalize(moved), sq), 1e-14);
}

TEST(Canonicalize, ReflectionRestoresCounterclockwise) {
  std::vector<Point2> mirrored;
  for (const auto& p : regular_pentagon().vertices) mirrored.push_back({p.x + 2.0, -p.y - 1.0});
  const Configuration c = canonicalize(mirrored);
  EXPECT_GT(polygon_signed_area(c), 0.0);
  EXPECT_LT(vertex_distance(c, regular_pentagon()), 1e-14);
  EXPECT_EQ(error_of([] { canonicalize({{1, 1}, {1, 1}, {1, 1}}); }), ErrorCode::DegenerateInput);
}

TEST(Convexity, Predicates) {
  EXPECT_TRUE(is_strictly_convex(regular_pentagon()));
  const Configuration flat{{{0, 0}, {1, 0}, {2, 0}, {1.5, 1}, {0.5, 1}}};
  EXPECT_FALSE(is_strictly_convex(flat));
  EXPECT_TRUE(is_weakly_convex(flat));
  const Configuration reflex{{{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}};
  EXPECT_FALSE(is_strictly_convex(reflex));
  std::vector<Point2> star;
  const auto reg = regular_pentagon();
  for (int i = 0; i < 5; ++i) star.push_back(reg[2 * i]);
  EXPECT_FALSE(is_strictly_convex(Configuration{star}));
}

TEST(Diagonals, RegularPentagonIsGoldenRatioSquared) {
  for (double x : diagonals(regular_pentagon())) EXPECT_NEAR(x, kPhi * kPhi, 1e-14);
}

TEST(Diagonals, DistinctConvexSamplesHaveDistinctImages) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l);
    const auto q = random_convex_pentagon(rng, l);
    if (vertex_distance(p.configuration, q.configuration) < 1e-6) continue;
    const auto xp = diagonals(p.configuration);
    const auto xq = diagonals(q.configuration);
    double diff = 0.0;
    for (int i = 0; i < 5; ++i) diff = std::max(diff, std::abs(xp[i] - xq[i]));
    EXPECT_GT(diff, 1e-9);
  }
}

TEST(Reconstruct, GoldenDiagonalsGiveRegularPentagon) {
  const Reconstruction r = reconstruct_pentagon(Linkage::equilateral(5), kPhi, kPhi);
  EXPECT_EQ(r.status, ShapeStatus::StrictlyConvex);
  EXPECT_LT(vertex_distance(r.configuration, regular_pentagon()), 1e-14);
}

TEST(Reconstruct, AlignedAndUnrealizable) {
  const Linkage l = Linkage::equilateral(5);
  EXPECT_EQ(reconstruct_pentagon(l, 2.0, 1.5).status, ShapeStatus::Boundary);
  EXPECT_EQ(error_of([&] { reconstruct_pentagon(l, 2.001, 1.5); }), ErrorCode::NotRealizable);
}

TEST(Reconstruct, RoundTripOnRandomConvexPentagons) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto s = random_convex_pentagon(rng, l);
    const auto x = diagonals(s.configuration);
    const auto r = reconstruct_pentagon(l, std::sqrt(x[1]), std::sqrt(x[3]));
    ASSERT_LT(vertex_distance(canonicalize(r.configuration.vertices), s.configuration), 1e-8);
    ASSERT_TRUE(realizes(l, r.configuration, 1e-10));
  }
}

// Brute-force oracle: scan b2 across its triangle-admissible range and test
// convexity of each placement directly.
TEST(SliceRange, AgreesWithBruteForceConvexityScan) {
  Rng rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto a = l.pentagon_sides();
    const double k = std::abs(a[2] - a[3]) + u(rng) * (a[2] + a[3] - std::abs(a[2] - a[3]));
    const Interval r = convex_b2_range(l, k);
    const double lo = std::max(std::abs(a[0] - a[1]), std::abs(k - a[4]));
    const double hi = std::min(a[0] + a[1], k + a[4]);
    for (int i = 1; i < 400; ++i) {
      const double b2 = lo + (hi - lo) * i / 400.0;
      bool convex = false;
      try {
        convex = reconstruct_pentagon(l, b2, k).status == ShapeStatus::StrictlyConvex;
      } catch (const Error&) {
      }
      const double edge = r.empty() ? INFINITY : std::min(std::abs(b2 - r.lo), std::abs(b2 - r.hi));
      if (edge < 1e-7) continue;
      ASSERT_EQ(convex, !r.empty() && r.contains(b2)) << "trial " << trial << " b2 " << b2;
    }
  }
}

TEST(SliceRange, EquilateralExamples) {
  const Linkage l = Linkage::equilateral(5);
  const Slice s = slice_range(l, kPhi);
  EXPECT_LT(s.x2_range.lo, kPhi * kPhi);
  EXPECT_GT(s.x2_range.hi, kPhi * kPhi);
  EXPECT_EQ(error_of([&] { slice_range(l, 1e-4); }), ErrorCode::EmptySlice);
  // The top slice b4 = a3 + a4 keeps A4 aligned; it is a boundary segment.
  const ConvexRegion region(l);
  EXPECT_NEAR(region.k_range().hi, 2.0, 1e-12);
  EXPECT_FALSE(region.slice(2.0).terminal);
  EXPECT_TRUE(region.slice(region.k_range().lo).terminal);
}

TEST(SliceRange, TerminalSliceCollapsesToAPoint) {
  // a3 + a4 exceeds the opposite chain, so the largest b4 stretches A5 A1 A2 A3.
  const Linkage l({1, 1, 2, 2, 1});
  const ConvexRegion region(l);
  EXPECT_NEAR(region.k_range().hi, 3.0, 1e-9);
  const Slice top = region.slice(region.k_range().hi);
  EXPECT_TRUE(top.terminal);
  EXPECT_EQ(top.x2_range.lo, top.x2_range.hi);
}

TEST(SliceRange, IntervalsVaryContinuouslyInK) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexRegion region(random_linkage(rng, 5));
    Interval prev = region.b2_range(region.k_at(0.001));
    for (int i = 2; i < 1000; ++i) {
      const Interval cur = region.b2_range(region.k_at(i / 1000.0));
      ASSERT_FALSE(cur.empty());
      ASSERT_LT(std::abs(cur.lo - prev.lo), 0.05);
      ASSERT_LT(std::abs(cur.hi - prev.hi), 0.05);
      prev = cur;
    }
  }
}

TEST(CmConstraints, VanishOnRealizedConfigurations) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto c = cm_constraints(diagonals(random_convex_pentagon(rng, l).configuration), l);
    for (double d : c.values) ASSERT_LE(std::abs(d), 1e-9);
  }
}

TEST(CmConstraints, RegularPentagonSignsAndPerturbation) {
  const Linkage l = Linkage::equilateral(5);
  auto x = diagonals(regular_pentagon());
  const auto c = cm_constraints(x, l);
  const int expected[5] = {0, +1, 0, -1, -1};
  for (int j = 0; j < 5; ++j) {
    const double g = c.gradients[1][j];
    EXPECT_EQ((g > 1e-12) - (g < -1e-12), expected[j]) << j;
  }
  x[1] += 0.1;
  EXPECT_GT(std::abs(cm_constraints(x, l).values[3]), 1e-3);
}

TEST(CmConstraints, SignTableOnRandomConvexPentagons) {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto c = cm_constraints(diagonals(random_convex_pentagon(rng, l).configuration), l);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double g = c.gradients[i][j];
        const int sign = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
        ASSERT_EQ(sign, kConstraintSignTable[i][j]) << "trial " << trial << " D" << i + 1 << " x" << j + 1;
      }
  }
}

TEST(CmConstraints, GradientsMatchFiniteDifferences) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto x = diagonals(random_convex_pentagon(rng, l).configuration);
    const auto c = cm_constraints(x, l);
    for (int j = 0; j < 5; ++j) {
      auto xp = x;
      auto xm = x;
      xp[j] += 1e-6;
      xm[j] -= 1e-6;
      const auto cp = cm_constraints(xp, l);
      const auto cm = cm_constraints(xm, l);
      for (int i = 0; i < 5; ++i) {
        const double fd = (cp.values[i] - cm.values[i]) / 2e-6;
        ASSERT_LE(std::abs(fd - c.gradients[i][j]), 1e-6 * std::max(1.0, std::abs(c.gradients[i][j])));
      }
    }
  }
}

TEST(Quadrilateral, UnitSquareAndRhombusFamily) {
  const Linkage l = Linkage::equilateral(4);
  const Configuration sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const auto psi = quad_psi(sq);
  EXPECT_NEAR(psi.x, 2.0, 1e-15);
  EXPECT_NEAR(psi.y, 2.0, 1e-15);
  EXPECT_NEAR(quad_curve_residual(l, psi.x, psi.y), 0.0, 1e-12);
  const Interval r = quad_convex_range(l);
  for (int i = 1; i < 100; ++i) {
    const auto rec = reconstruct_quad(l, r.lo + r.width() * i / 100.0);
    const auto p = quad_psi(rec.configuration);
    EXPECT_NEAR(p.x + p.y, 4.0, 1e-12);
    EXPECT_NEAR(quad_curve_residual(l, p.x, p.y), 0.0, 1e-12);
  }
  EXPECT_GT(std::abs(quad_curve_residual(l, 0.01, 0.01)), 5e-4);
}

TEST(SampleConvex, GridCoversTheRegion) {
  const Linkage l = Linkage::equilateral(5);
  const auto grid = sample_convex(l, 50, 50);
  EXPECT_EQ(grid.size(), 2500u);
  double nearest = INFINITY;
  for (const auto& s : grid) {
    ASSERT_TRUE(is_strictly_convex(s.configuration));
    nearest = std::min(nearest, vertex_distance(s.configuration, regular_pentagon()));
  }
  EXPECT_LT(nearest, 0.05);
  EXPECT_EQ(sample_convex(l, 1, 1).size(), 1u);
}

TEST(RandomLinkage, QuadrilateralsAreAlwaysRealizable) {
  Rng rng(17);
  for (int i = 0; i < 20000; ++i) EXPECT_NO_THROW(random_linkage(rng, 4));
}

TEST(ConvexRegion, TerminalSlicesAreRealizable) {
  Rng rng(23);
  std::vector<Linkage> linkages{
      Linkage({0.50934544879079158, 0.45680555860522609, 1, 0.73999089014619301, 0.4157953090268669})};
  for (int i = 0; i < 300; ++i) linkages.push_back(random_linkage(rng, 5));
  for (const Linkage& l : linkages) {
    const ConvexRegion region(l);
    for (double k : {region.k_range().lo, region.k_range().hi, region.k_at(0.0), region.k_at(1.0)}) {
      const Slice s = region.slice(k);
      EXPECT_NO_THROW(placement::pentagon(region.linkage().pentagon_sides(), std::sqrt(s.x2_range.lo), s.k, 1e-9))
          << "k = " << k;
    }
  }
}

}  // namespace
}  // namespace linkcharge
