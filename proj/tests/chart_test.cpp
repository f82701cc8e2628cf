#include <cmath>

#include <gtest/gtest.h>

#include "linkcharge/chart.hpp"
#include "linkcharge/error.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/sampling.hpp"

namespace linkcharge {
namespace {

DiagonalCoords diagonals_at(const Linkage& l, double b2, double b4) {
  const auto v = placement::pentagon(l.pentagon_sides(), b2, b4, 1e-12);
  return placement::pentagon_diagonals(v);
}

TEST(DiagonalJacobian, ClosedFormMatchesImplicitSolve) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto s = random_convex_pentagon(rng, l);
    const auto closed = diagonal_jacobian(s.configuration);
    const auto implicit = diagonal_jacobian_implicit(diagonals(s.configuration), l);
    for (int m = 0; m < 5; ++m) {
      ASSERT_NEAR(closed.along_x2[m], implicit.along_x2[m], 1e-8 * std::max(1.0, std::abs(closed.along_x2[m])));
      ASSERT_NEAR(closed.along_x4[m], implicit.along_x4[m], 1e-8 * std::max(1.0, std::abs(closed.along_x4[m])));
    }
  }
}

TEST(DiagonalJacobian, ClosedFormMatchesFiniteDifferences) {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto s = random_convex_pentagon(rng, l, 0.05);
    const auto j = diagonal_jacobian(s.configuration);
    const double x2 = s.b2 * s.b2;
    const double x4 = s.b4 * s.b4;
    const double h = 1e-6;
    const auto p2 = diagonals_at(l, std::sqrt(x2 + h), s.b4);
    const auto m2 = diagonals_at(l, std::sqrt(x2 - h), s.b4);
    const auto p4 = diagonals_at(l, s.b2, std::sqrt(x4 + h));
    const auto m4 = diagonals_at(l, s.b2, std::sqrt(x4 - h));
    for (int m = 0; m < 5; ++m) {
      const double fd2 = (p2[m] - m2[m]) / (2 * h);
      const double fd4 = (p4[m] - m4[m]) / (2 * h);
      ASSERT_NEAR(j.along_x2[m], fd2, 1e-6 * std::max(1.0, std::abs(fd2))) << trial << " m" << m;
      ASSERT_NEAR(j.along_x4[m], fd4, 1e-6 * std::max(1.0, std::abs(fd4))) << trial << " m" << m;
    }
  }
}

TEST(DiagonalJacobian, SliceMonotonicitySigns) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Linkage l = random_linkage(rng, 5);
    const auto j = diagonal_jacobian(random_convex_pentagon(rng, l).configuration);
    ASSERT_LT(j.along_x2[0], 0.0);
    ASSERT_LT(j.along_x2[2], 0.0);
    ASSERT_GT(j.along_x2[4], 0.0);
  }
}

TEST(DiagonalJacobian, AlignedVertexIsRejected) {
  // A2 straight: b2 = a1 + a2.
  const auto r = reconstruct_pentagon(Linkage::equilateral(5), 2.0, 1.5);
  EXPECT_THROW(
      {
        try {
          diagonal_jacobian(r.configuration);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::BoundaryConfiguration);
          throw;
        }
      },
      Error);
}

}  // namespace
}  // namespace linkcharge
