#include "linkcharge/stabilizer.hpp"

#include <array>
#include <cmath>

#include "linkcharge/chart.hpp"
#include "linkcharge/error.hpp"
#include "linkcharge/placement.hpp"

namespace linkcharge {

namespace {

void require_convex(const Configuration& p, std::size_t n) {
  if (p.size() != n) throw Error(ErrorCode::InvalidArgument, "wrong number of vertices");
  if (!is_weakly_convex(p)) throw Error(ErrorCode::NotConvex, "configuration not strictly convex");
  if (!is_strictly_convex(p))
    throw Error(ErrorCode::BoundaryConfiguration, "configuration has a straight vertex");
}

Configuration normalized(const Configuration& p) { return p.scaled(1.0 / p.scale()); }

// Diagonal partials of the quadrilateral Cayley-Menger determinant.
std::array<double, 2> quad_cm_partials(const Configuration& p) {
  const auto d = SquaredDistances4::from_points(std::array<Point2, 4>{p[0], p[1], p[2], p[3]});
  return {cayley_menger_partial(d, 0, 2), cayley_menger_partial(d, 1, 3)};
}

std::array<double, 5> lengths(const DiagonalCoords& x) {
  std::array<double, 5> b{};
  for (std::size_t m = 0; m < 5; ++m) b[m] = std::sqrt(x[m]);
  return b;
}

// Dihedral relabelling pi with pi(2) = t_vertex and pi(4) = s_vertex.
std::array<std::size_t, 5> control_relabelling(std::size_t t_vertex, std::size_t s_vertex) {
  for (std::size_t r = 0; r < 5; ++r)
    for (int dir : {1, -1}) {
      std::array<std::size_t, 5> pi{};
      for (std::size_t j = 0; j < 5; ++j) pi[j] = (r + 5 + dir * static_cast<int>(j)) % 5;
      if (pi[2] == t_vertex && pi[4] == s_vertex) return pi;
    }
  throw Error(ErrorCode::AdjacentControlCharges, "controlling charges must sit at non-adjacent vertices");
}

}  // namespace

QuadStabilization stabilize_quad(const Linkage& l, const Configuration& p) {
  if (l.size() != 4) throw Error(ErrorCode::InvalidArgument, "four-bar linkage expected");
  require_convex(p, 4);
  if (!realizes(l, p, 1e-6)) throw Error(ErrorCode::InvalidArgument, "configuration does not realize the linkage");
  const Configuration n = normalized(p);
  const QuadCurvePoint psi = quad_psi(n);
  const auto [dx, dy] = quad_cm_partials(n);
  QuadStabilization r;
  r.t = std::pow(psi.y / psi.x, 1.5) * dy / dx;

  using J = Jet<1>;
  std::array<double, 4> sides{};
  for (std::size_t i = 0; i < 4; ++i) sides[i] = distance(n[i], n[i + 1]);
  const auto q = placement::quadrilateral(sides, J::variable(std::sqrt(psi.x), 0), 1e-12);
  using std::sqrt;
  const J e = sqrt(placement::squared_norm(q[2] - q[0]));
  const J f = sqrt(placement::squared_norm(q[3] - q[1]));
  r.residual = std::abs((J(1.0) / e + J(r.t) / f).g[0]);
  return r;
}

JacobianEntries pentagon_jacobian(const Configuration& p) {
  require_convex(p, 5);
  const DiagonalJacobian d = diagonal_jacobian(p);
  const auto b = lengths(diagonals(p));
  JacobianEntries j;
  j.alpha1 = b[3] / b[4] * d.along_x4[4];
  j.beta1 = b[3] / b[2] * d.along_x4[2];
  j.gamma1 = b[3] / b[0] * d.along_x4[0];
  j.alpha2 = b[1] / b[4] * d.along_x2[4];
  j.beta2 = b[1] / b[2] * d.along_x2[2];
  j.gamma2 = b[1] / b[0] * d.along_x2[0];
  return j;
}

QuadraticCoeffs stabilizer_coefficients(const Configuration& p, double q1, double q2, double q4) {
  const Configuration n = normalized(p);
  const JacobianEntries j = pentagon_jacobian(n);
  const auto b = lengths(diagonals(n));
  const double b1s = b[0] * b[0], b2s = b[1] * b[1], b3s = b[2] * b[2], b4s = b[3] * b[3], b5s = b[4] * b[4];
  QuadraticCoeffs c;
  c.A = q1 * q4 * j.alpha1 / b5s + q2 * q4 * j.beta1 / b3s;
  c.B = q2 * j.gamma1 / b1s - (b2s / b4s) * (q4 * j.alpha2 / b5s + q2 * q4 * j.beta2 / (q1 * b3s));
  c.C = -b2s * j.gamma2 * q2 / (q1 * b4s * b1s);
  return c;
}

StabilizingSolution stabilize_pentagon(const Configuration& p, double q1, double q2, double q4) {
  require_convex(p, 5);
  if (!(q1 > 0.0 && q2 > 0.0 && q4 > 0.0))
    throw Error(ErrorCode::NonPositiveCharge, "fixed charges must be positive");
  StabilizingSolution r;
  r.coeffs = stabilizer_coefficients(p, q1, q2, q4);
  const auto [A, B, C] = r.coeffs;
  if (std::abs(C) < 1e-14) throw Error(ErrorCode::NumericalConditioning, "leading coefficient vanishes");
  const double disc = B * B - 4.0 * A * C;
  if (!(disc > 0.0)) throw Error(ErrorCode::NumericalConditioning, "quadratic has no distinct real roots");
  const double h = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  const double r1 = h / C;
  const double r2 = A / h;
  if ((r1 > 0.0) == (r2 > 0.0))
    throw Error(ErrorCode::NumericalConditioning, "quadratic does not have exactly one positive root");
  r.s = r1 > 0.0 ? r1 : r2;
  r.other_root = r1 > 0.0 ? r2 : r1;

  const Configuration n = normalized(p);
  const auto b = lengths(diagonals(n));
  const JacobianEntries j = pentagon_jacobian(n);
  r.t = -b[3] * b[3] * (A + r.s * q2 * j.gamma1 / (b[0] * b[0])) / r.s;
  if (!(r.t > 0.0)) throw Error(ErrorCode::NumericalConditioning, "recovered t is not positive");
  r.charges = pentagon_charges(q1, q2, q4, r.s, r.t);
  r.residual = stationarity_residual(p, r.charges);
  return r;
}

StabilizingSolution stabilize_pentagon(const Configuration& p, const ChargeVector& fixed, std::size_t t_vertex,
                                       std::size_t s_vertex) {
  if (fixed.size() != 5 || t_vertex >= 5 || s_vertex >= 5 || t_vertex == s_vertex)
    throw Error(ErrorCode::InvalidArgument, "invalid controlling charge placement");
  if ((t_vertex + 1) % 5 == s_vertex || (s_vertex + 1) % 5 == t_vertex)
    throw Error(ErrorCode::AdjacentControlCharges, "controlling charges must sit at non-adjacent vertices");
  require_convex(p, 5);
  const auto pi = control_relabelling(t_vertex, s_vertex);
  std::vector<Point2> v(5);
  for (std::size_t j = 0; j < 5; ++j) v[j] = p[pi[j]];
  StabilizingSolution r = stabilize_pentagon(canonicalize(v), fixed[pi[0]], fixed[pi[1]], fixed[pi[3]]);
  std::vector<double> q(5);
  for (std::size_t j = 0; j < 5; ++j) q[pi[j]] = r.charges[j];
  r.charges = ChargeVector(q);
  return r;
}

double RankSystem::max_abs_minor() const {
  double m = 0.0;
  for (double v : minors) m = std::max(m, std::abs(v));
  return m;
}

RankSystem rank_system(const Configuration& p, const ChargeVector& q) {
  if (q.size() != p.size()) throw Error(ErrorCode::InvalidArgument, "one charge per vertex required");
  const Configuration n = normalized(p);
  RankSystem r;
  if (p.size() == 4) {
    const QuadCurvePoint psi = quad_psi(n);
    const auto [dx, dy] = quad_cm_partials(n);
    r.rows = {{-0.5 * q.c(0, 2) / std::pow(psi.x, 1.5), -0.5 * q.c(1, 3) / std::pow(psi.y, 1.5)}, {dx, dy}};
  } else if (p.size() == 5) {
    const DiagonalCoords x = diagonals(n);
    const auto g = effective_potential(x, q).gradient;
    const ConstraintSet c = cm_constraints(x, linkage_of(n));
    r.rows.emplace_back(g.begin(), g.end());
    for (std::size_t i : {3, 1, 0}) r.rows.emplace_back(c.gradients[i].begin(), c.gradients[i].end());
  } else {
    throw Error(ErrorCode::InvalidArgument, "rank system needs four or five vertices");
  }
  for (auto& row : r.rows) {
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : row) v /= norm;
  }
  const std::size_t rows = r.rows.size();
  const std::size_t cols = r.rows[0].size();
  // Maximal minors: drop cols - rows columns; here at most one.
  for (std::size_t drop = 0; drop < cols; ++drop) {
    if (cols == rows && drop > 0) break;
    std::vector<double> m;
    for (const auto& row : r.rows)
      for (std::size_t c = 0; c < cols; ++c)
        if (cols == rows || c != drop) m.push_back(row[c]);
    r.minors.push_back(determinant(m, rows));
  }
  return r;
}

QuadRankForm quad_rank_form(const Configuration& p) {
  require_convex(p, 4);
  const Configuration n = normalized(p);
  const QuadCurvePoint psi = quad_psi(n);
  const auto [dx, dy] = quad_cm_partials(n);
  return {-0.5 * dy / std::pow(psi.x, 1.5), 0.5 * dx / std::pow(psi.y, 1.5)};
}

long bezout_bound(int n) {
  if (n < 4 || n > 62) throw Error(ErrorCode::InvalidArgument, "polygon needs at least one diagonal");
  return 1L << (n - 3);
}

bool mixed_sign_noncritical(const Configuration& p, double q1, double q2, double q4, double s, double t) {
  if (!(s * t < 0.0)) throw Error(ErrorCode::InvalidArgument, "controlling charges must have opposite signs");
  require_convex(p, 5);
  return stationarity_residual(p, pentagon_charges(q1, q2, q4, s, t)) > 1e-8;
}

}  // namespace linkcharge
