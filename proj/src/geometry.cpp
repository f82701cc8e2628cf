#include "linkcharge/geometry.hpp"

#include <stdexcept>
#include <utility>

namespace linkcharge {

SquaredDistances4::SquaredDistances4(double d01, double d02, double d03, double d12,
                                     double d13, double d23) {
  set(0, 1, d01);
  set(0, 2, d02);
  set(0, 3, d03);
  set(1, 2, d12);
  set(1, 3, d13);
  set(2, 3, d23);
}

void SquaredDistances4::set(std::size_t i, std::size_t j, double value) {
  if (i == j) throw std::invalid_argument("squared distance of a point to itself is fixed at 0");
  d_[i][j] = value;
  d_[j][i] = value;
}

SquaredDistances4 SquaredDistances4::from_points(const std::array<Point3, 4>& p) {
  SquaredDistances4 d;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      Point3 v = p[j] - p[i];
      d.set(i, j, dot(v, v));
    }
  return d;
}

SquaredDistances4 SquaredDistances4::from_points(const std::array<Point2, 4>& p) {
  return from_points(std::array<Point3, 4>{embed(p[0]), embed(p[1]), embed(p[2]), embed(p[3])});
}

double determinant(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      det = -det;
    }
    const double diag = a[col * n + col];
    det *= diag;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / diag;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

namespace {

std::vector<double> bordered(const SquaredDistances4& d) {
  std::vector<double> m(25, 0.0);
  for (std::size_t i = 1; i < 5; ++i) {
    m[i] = 1.0;
    m[i * 5] = 1.0;
    for (std::size_t j = 1; j < 5; ++j) m[i * 5 + j] = i == j ? 0.0 : d(i - 1, j - 1);
  }
  return m;
}

double cofactor(const std::vector<double>& m, std::size_t n, std::size_t row, std::size_t col) {
  std::vector<double> minor;
  minor.reserve((n - 1) * (n - 1));
  for (std::size_t r = 0; r < n; ++r) {
    if (r == row) continue;
    for (std::size_t c = 0; c < n; ++c)
      if (c != col) minor.push_back(m[r * n + c]);
  }
  const double sign = (row + col) % 2 == 0 ? 1.0 : -1.0;
  return sign * determinant(std::move(minor), n - 1);
}

double area_product(const std::array<Point3, 4>& p, std::size_t i, std::size_t j) {
  if (i == j || i > 3 || j > 3) throw std::invalid_argument("cm_partial needs two distinct labels in 0..3");
  std::size_t rest[2];
  std::size_t r = 0;
  for (std::size_t s = 0; s < 4; ++s)
    if (s != i && s != j) rest[r++] = s;
  const std::size_t k = rest[0];
  const std::size_t l = rest[1];
  return dot(area_vector(p[i], p[k], p[l]), area_vector(p[k], p[j], p[l]));
}

}  // namespace

double cayley_menger(const SquaredDistances4& d) { return determinant(bordered(d), 5); }

double cayley_menger_partial(const SquaredDistances4& d, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("cayley_menger_partial needs i != j");
  // d_ij^2 sits at (i+1, j+1) and (j+1, i+1); the cofactors coincide by symmetry.
  return 2.0 * cofactor(bordered(d), 5, i + 1, j + 1);
}

double signed_area(Point2 p_i, Point2 p_j, Point2 p_k) {
  return 0.5 * cross(p_j - p_i, p_k - p_j);
}

Point3 area_vector(Point3 p_i, Point3 p_j, Point3 p_k) {
  return 0.5 * cross(p_j - p_i, p_k - p_j);
}

double cm_partial_x13(const std::array<Point3, 4>& p) {
  return -32.0 * dot(area_vector(p[0], p[1], p[3]), area_vector(p[1], p[2], p[3]));
}

double cm_partial(const std::array<Point3, 4>& p, std::size_t i, std::size_t j) {
  return -32.0 * area_product(p, i, j);
}

double cm_partial(const std::array<Point2, 4>& p, std::size_t i, std::size_t j) {
  return cm_partial(std::array<Point3, 4>{embed(p[0]), embed(p[1]), embed(p[2]), embed(p[3])}, i, j);
}

}  // namespace linkcharge
