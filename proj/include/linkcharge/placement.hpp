#pragma once

// Coordinate placement of pentagons and quadrilaterals from diagonal lengths.
// Templated on the scalar so the same code yields values (double) and exact
// derivatives (Jet<N>).

#include <array>
#include <cmath>

#include "linkcharge/error.hpp"
#include "linkcharge/jet.hpp"

namespace linkcharge::placement {

template <typename T>
struct Vec {
  T x;
  T y;
};

template <typename T>
Vec<T> operator-(const Vec<T>& a, const Vec<T>& b) {
  return {a.x - b.x, a.y - b.y};
}

template <typename T>
T squared_norm(const Vec<T>& a) {
  return a.x * a.x + a.y * a.y;
}

/// Third vertex of the triangle (p, q, apex) with |p apex| = rp and
/// |q apex| = rq. side = +1 puts it left of p->q, -1 right of it. Slightly
/// negative heights within tol (squared length units) are clamped to zero.
template <typename T>
Vec<T> apex(const Vec<T>& p, const Vec<T>& q, const T& rp, const T& rq, double side, double tol) {
  using std::sqrt;
  const Vec<T> u = q - p;
  const T d2 = squared_norm(u);
  const T d = sqrt(d2);
  const T along = (rp * rp - rq * rq + d2) / (d * 2.0);
  const T h2 = rp * rp - along * along;
  T h(0.0);
  if (value_of(h2) < -tol) {
    throw Error(ErrorCode::NotRealizable, "triangle inequality violated while placing a vertex");
  } else if (value_of(h2) > 0.0) {
    h = sqrt(h2);
  }
  const T a = along / d;
  const T b = h * side / d;
  return {p.x + u.x * a - u.y * b, p.y + u.y * a + u.x * b};
}

/// Pentagon A1..A5 with sides a, |A1A3| = b2 and |A3A5| = b4. A1 sits at the
/// origin, A2 on the positive x axis, A3 above it, A5 left of A1->A3 and A4
/// right of A3->A5 (the counterclockwise convex branch).
template <typename T>
std::array<Vec<T>, 5> pentagon(const std::array<double, 5>& a, const T& b2, const T& b4, double tol) {
  const Vec<T> a1{T(0.0), T(0.0)};
  const Vec<T> a2{T(a[0]), T(0.0)};
  const Vec<T> a3 = apex(a1, a2, b2, T(a[1]), 1.0, tol);
  const Vec<T> a5 = apex(a1, a3, T(a[4]), b4, 1.0, tol);
  const Vec<T> a4 = apex(a3, a5, T(a[2]), T(a[3]), -1.0, tol);
  return {a1, a2, a3, a4, a5};
}

/// Quadrilateral Q1..Q4 with sides p (Q1Q2, Q2Q3, Q3Q4, Q4Q1) and diagonal
/// |Q1Q3| = e, counterclockwise with Q2 and Q4 on opposite sides of Q1Q3.
template <typename T>
std::array<Vec<T>, 4> quadrilateral(const std::array<double, 4>& p, const T& e, double tol) {
  const Vec<T> q1{T(0.0), T(0.0)};
  const Vec<T> q2{T(p[0]), T(0.0)};
  const Vec<T> q3 = apex(q1, q2, e, T(p[1]), 1.0, tol);
  const Vec<T> q4 = apex(q1, q3, T(p[3]), T(p[2]), 1.0, tol);
  return {q1, q2, q3, q4};
}

/// Squared pentagon diagonals x_m = |A_{m-1} A_{m+1}|^2 (0-based m, indices mod 5).
template <typename T>
std::array<T, 5> pentagon_diagonals(const std::array<Vec<T>, 5>& v) {
  std::array<T, 5> x;
  for (int m = 0; m < 5; ++m) x[m] = squared_norm(v[(m + 1) % 5] - v[(m + 4) % 5]);
  return x;
}

}  // namespace linkcharge::placement
