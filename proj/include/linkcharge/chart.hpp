#pragma once

// Local calculus on the convex pentagon region in the chart (x2, x4).

#include <array>

#include "linkcharge/moduli.hpp"

namespace linkcharge {

/// Signed area S_ijk of pentagon vertices with 1-based labels.
double pentagon_area(const Configuration& p, int i, int j, int k);

/// Derivatives of all five squared diagonals along the chart directions:
/// along_x2 moves x2 with x4 fixed, along_x4 moves x4 with x2 fixed.
struct DiagonalJacobian {
  std::array<double, 5> along_x2{};
  std::array<double, 5> along_x4{};
};

/// Closed form from signed-area ratios. Throws BoundaryConfiguration when a
/// denominator area vanishes.
DiagonalJacobian diagonal_jacobian(const Configuration& p);

/// along_x2 alone. Needs fewer regular areas, so it also works on the slice
/// where A4 is straight.
std::array<double, 5> slice_direction(const Configuration& p);

/// Same quantities from the linear solve of the Cayley-Menger gradients.
DiagonalJacobian diagonal_jacobian_implicit(const DiagonalCoords& x, const Linkage& l);

}  // namespace linkcharge
