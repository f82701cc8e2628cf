#pragma once

#include <cstddef>
#include <vector>

#include "linkcharge/moduli.hpp"
#include "linkcharge/potential.hpp"

namespace linkcharge {

/// Stabilizing charge of a convex four-bar configuration. The charges are
/// (1, t, 1, 1), so E = 1/d13 + t/d24.
struct QuadStabilization {
  double t = 0.0;
  /// |dE/dd13| along the configuration curve, in normalized units.
  double residual = 0.0;
};

/// Throws NotConvex, or BoundaryConfiguration when a vertex is straight.
QuadStabilization stabilize_quad(const Linkage& l, const Configuration& p);

/// Partials of b5, b3, b1 with respect to the chart lengths b4 (index 1) and
/// b2 (index 2).
struct JacobianEntries {
  double alpha1 = 0.0, beta1 = 0.0, gamma1 = 0.0;
  double alpha2 = 0.0, beta2 = 0.0, gamma2 = 0.0;
};

JacobianEntries pentagon_jacobian(const Configuration& p);

/// A + B s + C s^2 = 0 for the charge s at vertex 5.
struct QuadraticCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
};

QuadraticCoeffs stabilizer_coefficients(const Configuration& p, double q1, double q2, double q4);

struct StabilizingSolution {
  double s = 0.0;
  double t = 0.0;
  double other_root = 0.0;  // the second root of the quadratic in s
  QuadraticCoeffs coeffs;
  ChargeVector charges;  // full charges, in the caller's labelling
  double residual = 0.0;
};

/// Charges (q1, q2, t, q4, s) making p critical. Throws NotConvex,
/// BoundaryConfiguration or NumericalConditioning.
StabilizingSolution stabilize_pentagon(const Configuration& p, double q1, double q2, double q4);

/// General placement: the controlling charges t and s sit at t_vertex and
/// s_vertex (0-based, non-adjacent); the entries of `fixed` at those two
/// vertices are ignored. Throws AdjacentControlCharges for neighbours.
StabilizingSolution stabilize_pentagon(const Configuration& p, const ChargeVector& fixed, std::size_t t_vertex,
                                       std::size_t s_vertex);

/// Gradient of E stacked over the constraint gradients in diagonal
/// coordinates, each row scaled to unit length, with all maximal minors.
struct RankSystem {
  std::vector<std::vector<double>> rows;
  std::vector<double> minors;
  double max_abs_minor() const;
};

RankSystem rank_system(const Configuration& p, const ChargeVector& q);

/// Coefficients of the single critical-point equation of a four-bar:
/// minor = a q1 q3 + b q2 q4 (unnormalized rows).
struct QuadRankForm {
  double a = 0.0;
  double b = 0.0;
};

QuadRankForm quad_rank_form(const Configuration& p);

/// Number of complex solutions bound for the stabilizing system: 2^(n-3).
long bezout_bound(int n);

/// True when p is not critical under (q1, q2, t, q4, s) with s t < 0.
/// Throws InvalidArgument unless s t < 0.
bool mixed_sign_noncritical(const Configuration& p, double q1, double q2, double q4, double s, double t);

}  // namespace linkcharge
