#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace linkcharge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2, Point2) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline double squared_distance(Point2 a, Point2 b) { return dot(b - a, b - a); }

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Point3 embed(Point2 p) { return {p.x, p.y, 0.0}; }

/// Symmetric table of squared distances between four labelled points.
/// Indices are 0-based; the diagonal is zero.
class SquaredDistances4 {
 public:
  SquaredDistances4() = default;
  SquaredDistances4(double d01, double d02, double d03, double d12, double d13, double d23);

  static SquaredDistances4 from_points(const std::array<Point3, 4>& p);
  static SquaredDistances4 from_points(const std::array<Point2, 4>& p);

  double operator()(std::size_t i, std::size_t j) const { return d_[i][j]; }
  void set(std::size_t i, std::size_t j, double value);

 private:
  std::array<std::array<double, 4>, 4> d_{};
};

/// Determinant of a dense row-major n x n matrix by Gaussian elimination with
/// partial pivoting. The argument is consumed as scratch space.
double determinant(std::vector<double> a, std::size_t n);

/// The 5x5 bordered Cayley-Menger determinant. Equals 288 V^2 for a
/// realizable tetrahedron of volume V.
double cayley_menger(const SquaredDistances4& d);

/// dD/d(d_ij^2) from the cofactors of the bordered matrix. This route needs
/// no coordinates, only the distance table.
double cayley_menger_partial(const SquaredDistances4& d, std::size_t i, std::size_t j);

/// Oriented area of the planar triangle (p_i, p_j, p_k): positive when the
/// triangle is counterclockwise. Antisymmetric in its last two arguments.
double signed_area(Point2 p_i, Point2 p_j, Point2 p_k);

/// Vector area 1/2 (p_j - p_i) x (p_k - p_j). For points in the z = 0 plane
/// its z component equals signed_area of the projected triangle.
Point3 area_vector(Point3 p_i, Point3 p_j, Point3 p_k);

/// dD/d(d_13^2) = -32 <S_124, S_234> (labels 1..4 mapped to p[0..3]).
double cm_partial_x13(const std::array<Point3, 4>& p);

/// Same identity after relabelling: dD/d(d_ij^2) = -32 <S_ikl, S_kjl> where
/// {k, l} are the two remaining labels.
double cm_partial(const std::array<Point3, 4>& p, std::size_t i, std::size_t j);
double cm_partial(const std::array<Point2, 4>& p, std::size_t i, std::size_t j);

}  // namespace linkcharge
