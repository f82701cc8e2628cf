#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "linkcharge/geometry.hpp"

namespace linkcharge {

/// Cyclic chain of rigid bars. side(i) joins vertex i to vertex i + 1 (mod n).
class Linkage {
 public:
  /// Throws InvalidLinkage unless n is 4 or 5, every side is positive and
  /// every side is shorter than the sum of the others.
  explicit Linkage(std::vector<double> sides);

  static Linkage equilateral(std::size_t n, double side = 1.0);

  std::size_t size() const { return sides_.size(); }
  double side(std::size_t i) const { return sides_[i % sides_.size()]; }
  const std::vector<double>& sides() const { return sides_; }
  double scale() const { return scale_; }
  Linkage scaled(double factor) const;

  std::array<double, 5> pentagon_sides() const;
  std::array<double, 4> quad_sides() const;

 private:
  std::vector<double> sides_;
  double scale_ = 1.0;
};

/// Planar placement of the vertices. Canonical configurations have the first
/// vertex at the origin, the second on the positive x axis and nonnegative
/// signed area.
struct Configuration {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i % vertices.size()]; }
  Configuration scaled(double factor) const;
  double scale() const;  // longest edge
};

/// The linkage whose sides are the edges of p.
Linkage linkage_of(const Configuration& p);

/// Maximum vertexwise Euclidean distance between two configurations.
double vertex_distance(const Configuration& a, const Configuration& b);

Configuration canonicalize(std::vector<Point2> vertices);

double polygon_signed_area(const Configuration& p);

/// Smallest turning cross product (p_i - p_{i-1}) x (p_{i+1} - p_i), taken
/// with the sign of the polygon orientation. Positive for strictly convex.
double convexity_margin(const Configuration& p);

/// Default threshold for strict convexity: 1e-10 scale^2.
double convexity_tolerance(const Configuration& p);

bool is_strictly_convex(const Configuration& p);

/// Closed-convex test: every turn is at least -tolerance.
bool is_weakly_convex(const Configuration& p);

/// Every |p_i p_{i+1}| matches the linkage within rel_tol * scale.
bool realizes(const Linkage& l, const Configuration& p, double rel_tol = 1e-9);

/// Squared diagonals x[m] = |p_{m-1} p_{m+1}|^2 (0-based, mod 5) of a pentagon.
using DiagonalCoords = std::array<double, 5>;

DiagonalCoords diagonals(const Configuration& p);

/// Linkages whose moduli space is singular (some signed sum of sides
/// vanishes) or whose convex region pinches to a point between the terminals.
bool is_nongeneric(const Linkage& l);

enum class ShapeStatus { StrictlyConvex, Boundary };

struct Reconstruction {
  Configuration configuration;
  ShapeStatus status = ShapeStatus::StrictlyConvex;
};

/// The convex pentagon with |A1A3| = b2 and |A3A5| = b4 in canonical
/// placement. Throws NotRealizable or NotConvex.
Reconstruction reconstruct_pentagon(const Linkage& l, double b2, double b4);

struct Interval {
  double lo = 0.0;
  double hi = -1.0;

  bool empty() const { return hi < lo; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Range of the diagonal |Q1Q3| over closed-convex quadrilaterals with sides
/// (Q1Q2, Q2Q3, Q3Q4, Q4Q1) = p, where the interior angle at Q_i may not
/// exceed angle_budget[i]. Empty if no such quadrilateral exists.
Interval quad_diagonal_range(const std::array<double, 4>& p, const std::array<double, 4>& angle_budget);

/// Closed range of b4 = |A3A5| over convex configurations.
Interval admissible_k(const Linkage& l);

/// Range of b2 = |A1A3| over convex configurations with b4 = k. May be empty.
Interval convex_b2_range(const Linkage& l, double k);

struct Slice {
  double k = 0.0;
  Interval x2_range;
  bool terminal = false;
};

/// Throws EmptySlice when k is not admissible. The interval is collapsed to a
/// point at the terminal values of k.
Slice slice_range(const Linkage& l, double k);

/// The five Cayley-Menger constraints D_1..D_5 and their gradients in x.
/// D_i is the determinant of the four vertices other than vertex i.
struct ConstraintSet {
  std::array<double, 5> values{};
  std::array<std::array<double, 5>, 5> gradients{};
};

ConstraintSet cm_constraints(const DiagonalCoords& x, const Linkage& l);

/// Squared distance table of the quadruple left after removing vertex
/// `removed` (0-based) of a pentagon with diagonals x.
SquaredDistances4 pentagon_quadruple(const DiagonalCoords& x, const Linkage& l, std::size_t removed);

/// Sign of dD_i/dx_j on strictly convex pentagons (row i, column j).
inline constexpr std::array<std::array<int, 5>, 5> kConstraintSignTable{{
    {+1, 0, -1, -1, 0},
    {0, +1, 0, -1, -1},
    {-1, 0, +1, 0, -1},
    {-1, -1, 0, +1, 0},
    {0, -1, -1, 0, +1},
}};

struct QuadCurvePoint {
  double x = 0.0;  // |A1A3|^2
  double y = 0.0;  // |A2A4|^2
};

QuadCurvePoint quad_psi(const Configuration& p);

/// Cayley-Menger determinant of the quadrilateral with diagonals^2 (x, y).
double quad_curve_residual(const Linkage& l, double x, double y);

/// Range of d13 over convex configurations of a four-bar linkage.
Interval quad_convex_range(const Linkage& l);

/// Canonical convex quadrilateral with |A1A3| = d13. Throws NotRealizable.
Reconstruction reconstruct_quad(const Linkage& l, double d13);

struct ConvexSample {
  double k = 0.0;
  double x2 = 0.0;
  Configuration configuration;
};

/// nk x nx grid over the convex region: slice values at cell centres of the
/// admissible k range, and within each slice cell centres of its b2 range.
std::vector<ConvexSample> sample_convex(const Linkage& l, std::size_t nk, std::size_t nx);

}  // namespace linkcharge
