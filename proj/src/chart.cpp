#include "linkcharge/chart.hpp"

#include <cmath>
#include <initializer_list>

#include "linkcharge/error.hpp"

namespace linkcharge {

double pentagon_area(const Configuration& p, int i, int j, int k) {
  return signed_area(p[i - 1], p[j - 1], p[k - 1]);
}

namespace {

void require_regular(const Configuration& p, std::initializer_list<double> areas) {
  const double tol = 1e-14 * p.scale() * p.scale();
  for (double s : areas)
    if (std::abs(s) <= tol) throw Error(ErrorCode::BoundaryConfiguration, "aligned vertices: chart is singular");
}

}  // namespace

std::array<double, 5> slice_direction(const Configuration& p) {
  if (p.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon expected");
  auto S = [&](int i, int j, int k) { return pentagon_area(p, i, j, k); };
  const double s123 = S(1, 2, 3), s135 = S(1, 3, 5), s235 = S(2, 3, 5);
  require_regular(p, {s123, s135, s235});
  std::array<double, 5> d{};
  d[0] = -S(1, 2, 5) * s235 / (s123 * s135);
  d[1] = 1.0;
  d[2] = S(2, 3, 4) / s235 * d[0];
  d[4] = S(1, 4, 5) / s135;
  return d;
}

DiagonalJacobian diagonal_jacobian(const Configuration& p) {
  auto S = [&](int i, int j, int k) { return pentagon_area(p, i, j, k); };
  DiagonalJacobian j;
  j.along_x2 = slice_direction(p);
  const double s135 = S(1, 3, 5), s235 = S(2, 3, 5), s345 = S(3, 4, 5);
  require_regular(p, {s345});
  const double s145 = S(1, 4, 5), s234 = S(2, 3, 4);
  j.along_x4[0] = S(1, 2, 5) / s135;
  j.along_x4[2] = s234 / s235 * j.along_x4[0] - s234 * S(2, 4, 5) / (s235 * s345);
  j.along_x4[3] = 1.0;
  j.along_x4[4] = -S(1, 3, 4) * s145 / (s345 * s135);
  return j;
}

DiagonalJacobian diagonal_jacobian_implicit(const DiagonalCoords& x, const Linkage& l) {
  const auto g = cm_constraints(x, l).gradients;
  auto solve = [&](double dx2, double dx4) {
    std::array<double, 5> d{};
    d[1] = dx2;
    d[3] = dx4;
    // D4 involves x1, x2, x4; D2 involves x2, x4, x5; D1 involves x1, x3, x4.
    d[0] = -(g[3][1] * dx2 + g[3][3] * dx4) / g[3][0];
    d[4] = -(g[1][1] * dx2 + g[1][3] * dx4) / g[1][4];
    d[2] = -(g[0][0] * d[0] + g[0][3] * dx4) / g[0][2];
    return d;
  };
  return {solve(1.0, 0.0), solve(0.0, 1.0)};
}

}  // namespace linkcharge
