#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "linkcharge/jet.hpp"
#include "linkcharge/moduli.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/region.hpp"

namespace linkcharge {

/// Point charges q_i at the vertices of a polygon.
class ChargeVector {
 public:
  ChargeVector() = default;
  explicit ChargeVector(std::vector<double> q);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i % q_.size()]; }
  const std::vector<double>& values() const { return q_; }
  double c(std::size_t i, std::size_t j) const { return (*this)[i] * (*this)[j]; }
  bool all_positive() const;

 private:
  std::vector<double> q_;
};

/// Charges (q1, q2, t, q4, s): the fixed charges plus the two controlling
/// charges at vertices 3 and 5.
ChargeVector pentagon_charges(double q1, double q2, double q4, double s, double t);

/// Product of the charges at the endpoints of pentagon diagonal m.
double diagonal_charge(const ChargeVector& q, std::size_t m);

struct EnergyReport {
  double E = 0.0;
  std::array<double, 5> gradient{};  // dE/dx_m on R^5
};

/// Sum of c/b over the five pentagon diagonals. Throws DegenerateDistance
/// unless every x_m is positive.
EnergyReport effective_potential(const DiagonalCoords& x, const ChargeVector& q);

/// Sum over non-neighbouring vertex pairs of a quadrilateral or pentagon.
double effective_potential(const Configuration& p, const ChargeVector& q);

/// Sum over all unordered vertex pairs. Throws DegenerateDistance on
/// coincident vertices.
double full_potential(const Configuration& p, const ChargeVector& q);

/// Effective potential as a function of the chart lengths (b2, b4).
template <typename T>
T chart_energy(const std::array<double, 5>& sides, const ChargeVector& q, const T& b2, const T& b4,
               double tol) {
  using std::sqrt;
  const auto x = placement::pentagon_diagonals(placement::pentagon(sides, b2, b4, tol));
  T e(0.0);
  for (std::size_t m = 0; m < 5; ++m) e = e + T(diagonal_charge(q, m)) / sqrt(x[m]);
  return e;
}

/// dE/dx2 and d2E/dx2^2 along the slice b4 = k.
struct SliceDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// Throws BoundarySlicePoint unless x2 lies strictly inside the slice and the
/// chart is regular there.
SliceDerivatives slice_derivatives(const Linkage& l, const ChargeVector& q, double k, double x2);

struct SliceMinimizer {
  double k = 0.0;
  double x2 = 0.0;
  bool on_boundary = false;
  double E = 0.0;
};

SliceMinimizer slice_minimize(const ConvexRegion& region, const ChargeVector& q, double k);
SliceMinimizer slice_minimize(const Linkage& l, const ChargeVector& q, double k);

struct PolarCurve {
  std::vector<SliceMinimizer> points;
  /// Half-open index ranges of maximal runs of interior minimizers.
  std::vector<std::pair<std::size_t, std::size_t>> components;
};

PolarCurve trace_polar_curve(const Linkage& l, const ChargeVector& q, const std::vector<double>& k_grid);

/// Norm of (dE/db2, dE/db4) for a convex pentagon, after rescaling the
/// configuration to unit longest edge.
double stationarity_residual(const Configuration& p, const ChargeVector& q);

struct Minimum {
  Configuration configuration;
  double E = 0.0;
  double b2 = 0.0;
  double b4 = 0.0;
  double residual = 0.0;  // |(dE/db2, dE/db4)| at unit scale
};

/// Damped Newton descent in (x2, x4) from the chart point (b2, b4), kept
/// inside the strictly convex region. Throws NumericalConditioning if it
/// cannot reach a stationary point.
Minimum descend(const Linkage& l, const ChargeVector& q, double b2, double b4);

/// The unique minimum of E over the convex region. Throws NonPositiveCharge
/// or NongenericLinkage.
Minimum global_min_convex(const Linkage& l, const ChargeVector& q);

struct UniquenessReport {
  std::size_t grid = 0;
  std::size_t grid_minima = 0;
  /// Distinct limits of descent started from the grid minima.
  std::size_t local_minima = 0;
  Configuration best;  // lowest grid sample
  /// Largest number of interior extrema of E along the polar curve within a
  /// single component.
  std::size_t max_component_extrema = 0;
};

/// Finds strict 8-neighbour minima of E on a grid x grid lattice over the
/// (b2, b4) box around the convex region, skipping cells outside it, then
/// descends from each and counts the distinct limits.
UniquenessReport verify_unique_min(const Linkage& l, const ChargeVector& q, std::size_t grid);

}  // namespace linkcharge
