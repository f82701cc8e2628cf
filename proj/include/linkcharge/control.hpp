#pragma once

#include <cstddef>
#include <vector>

#include "linkcharge/moduli.hpp"
#include "linkcharge/potential.hpp"

namespace linkcharge {

/// Controlling charges: s at vertex 5, t at vertex 3.
struct ChargePoint {
  double s = 1.0;
  double t = 1.0;
};

/// Polyline in the open positive quadrant of the (s, t) plane.
class ChargePath {
 public:
  /// Throws InvalidChargePath if empty or if a waypoint is not positive.
  explicit ChargePath(std::vector<ChargePoint> waypoints);

  /// from -> to split into `steps` equal increments (steps + 1 waypoints).
  static ChargePath segment(ChargePoint from, ChargePoint to, std::size_t steps);

  const std::vector<ChargePoint>& waypoints() const { return waypoints_; }

  /// Every leg split into `factor` equal pieces.
  ChargePath refined(std::size_t factor) const;

 private:
  std::vector<ChargePoint> waypoints_;
};

/// Charges that stay put during navigation.
struct FixedCharges {
  double q1 = 1.0;
  double q2 = 1.0;
  double q4 = 1.0;

  ChargeVector with(ChargePoint c) const { return pentagon_charges(q1, q2, q4, c.s, c.t); }
};

struct TrajectoryStep {
  ChargePoint control;
  Configuration configuration;
  double E = 0.0;
  double residual = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::size_t retries = 0;        // step doublings after continuation breaks
  double endpoint_error = 0.0;    // distance of the last step from the target
};

/// Follows the convex minimum along the path, starting from `start`, which
/// must be critical for the first waypoint. Throws ContinuationBreak when a
/// step jumps by more than 50 times the median of the 17 steps around it.
Trajectory lift_path(const Linkage& l, const ChargePath& path, const FixedCharges& fixed, const Configuration& start);

/// Steers from `from` to `to` along the straight charge segment between their
/// stabilizing charges. Doubles the step count after a continuation break,
/// up to 16 times the requested count.
Trajectory navigate(const Linkage& l, const Configuration& from, const Configuration& to, const FixedCharges& fixed,
                    std::size_t steps);

/// |dE/ds| along the boundary stratum through p, with s the arc length of
/// the squared-diagonal image, in normalized units. Throws NotOnBoundary
/// unless some vertex of p is straight.
double tangential_gradient(const Linkage& l, const ChargeVector& q, const Configuration& p);

struct BoundaryScanReport {
  std::size_t samples = 0;
  double min_tangential_gradient = 0.0;
  Configuration argmin;
  std::size_t argmin_vertex = 0;  // the straight vertex of argmin
};

/// Samples each stratum "vertex j straight" of the closed convex region.
BoundaryScanReport boundary_criticality_scan(const Linkage& l, const ChargeVector& q, std::size_t samples);

}  // namespace linkcharge
