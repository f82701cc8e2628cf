#include "linkcharge/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdio>
#include <limits>
#include <string>

#include "linkcharge/chart.hpp"
#include "linkcharge/error.hpp"

namespace linkcharge {

namespace {

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

double placement_tol(const std::array<double, 5>& a) {
  const double s = *std::max_element(a.begin(), a.end());
  return 1e-12 * s * s;
}

Configuration place(const std::array<double, 5>& a, double b2, double b4) {
  const auto v = placement::pentagon(a, b2, b4, placement_tol(a));
  Configuration c;
  for (const auto& p : v) c.vertices.push_back({p.x, p.y});
  return c;
}

// dE/dx_m on R^5 at the given diagonals.
std::array<double, 5> ambient_gradient(const DiagonalCoords& x, const ChargeVector& q) {
  std::array<double, 5> g{};
  for (std::size_t m = 0; m < 5; ++m) g[m] = -0.5 * diagonal_charge(q, m) / (x[m] * std::sqrt(x[m]));
  return g;
}

// Chart gradient (dE/dx2, dE/dx4) via the area Jacobian.
std::array<double, 2> chart_gradient(const Configuration& p, const ChargeVector& q) {
  const auto g = ambient_gradient(diagonals(p), q);
  const DiagonalJacobian j = diagonal_jacobian(p);
  std::array<double, 2> r{};
  for (std::size_t m = 0; m < 5; ++m) {
    r[0] += g[m] * j.along_x2[m];
    r[1] += g[m] * j.along_x4[m];
  }
  return r;
}

double slice_first(const std::array<double, 5>& a, const ChargeVector& q, double x2, double k) {
  try {
    const Configuration p = place(a, std::sqrt(x2), k);
    const auto g = ambient_gradient(diagonals(p), q);
    const auto d = slice_direction(p);
    double r = 0.0;
    for (std::size_t m = 0; m < 5; ++m) r += g[m] * d[m];
    return r;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BoundaryConfiguration) throw Error(ErrorCode::BoundarySlicePoint, e.what());
    throw;
  }
}

double slice_second(const std::array<double, 5>& a, const ChargeVector& q, double x2, double k) {
  using std::sqrt;
  const Jet1 b2 = sqrt(Jet1::variable(x2, 0));
  return chart_energy(a, q, b2, Jet1(k), placement_tol(a)).h[0][0];
}

double energy(const std::array<double, 5>& a, const ChargeVector& q, double b2, double b4) {
  return chart_energy(a, q, b2, b4, placement_tol(a));
}

void require_pentagon_charges(const ChargeVector& q) {
  if (q.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon needs five charges");
}

bool strictly_inside(const Linkage& l, double b2, double b4) {
  if (!(b2 > 0.0) || !(b4 > 0.0)) return false;
  const Interval r = convex_b2_range(l, b4);
  if (r.empty() || !(b2 > r.lo && b2 < r.hi)) return false;
  return is_strictly_convex(place(l.pentagon_sides(), b2, b4));
}

Minimum finish(const Linkage& l, const ChargeVector& q, double b2, double b4) {
  Minimum m;
  m.configuration = place(l.pentagon_sides(), b2, b4);
  m.E = energy(l.pentagon_sides(), q, b2, b4);
  m.b2 = b2;
  m.b4 = b4;
  const auto a = l.pentagon_sides();
  const Jet2 e = chart_energy(a, q, Jet2::variable(b2, 0), Jet2::variable(b4, 1), placement_tol(a));
  m.residual = std::hypot(e.g[0], e.g[1]);
  return m;
}

// Residual test that tolerates the gradient noise of rounding (x2, x4) to
// doubles, which dominates for very stiff minima.
bool stationary(const Linkage& l, const ChargeVector& q, const Minimum& m, double tol) {
  if (m.residual <= tol) return true;
  using std::sqrt;
  const auto a = l.pentagon_sides();
  const double x2 = m.b2 * m.b2;
  const double x4 = m.b4 * m.b4;
  const Jet2 e = chart_energy(a, q, sqrt(Jet2::variable(x2, 0)), sqrt(Jet2::variable(x4, 1)), placement_tol(a));
  const double n2 = 2.0 * m.b2 * (std::abs(e.h[0][0]) * x2 + std::abs(e.h[0][1]) * x4);
  const double n4 = 2.0 * m.b4 * (std::abs(e.h[1][0]) * x2 + std::abs(e.h[1][1]) * x4);
  return m.residual <= 16.0 * std::numeric_limits<double>::epsilon() * std::hypot(n2, n4);
}

Minimum newton_descent(const Linkage& l, const ChargeVector& q, double b2, double b4) {
  using std::sqrt;
  const auto a = l.pentagon_sides();
  const double tol = placement_tol(a);
  auto local = [&](double x2, double x4) {
    return chart_energy(a, q, sqrt(Jet2::variable(x2, 0)), sqrt(Jet2::variable(x4, 1)), tol);
  };
  auto gradient_norm = [](const Jet2& e, double x2, double x4) {
    return std::hypot(2.0 * std::sqrt(x2) * e.g[0], 2.0 * std::sqrt(x4) * e.g[1]);
  };
  double x2 = b2 * b2;
  double x4 = b4 * b4;
  double best2 = x2, best4 = x4;
  double best_grad = std::numeric_limits<double>::infinity();
  int stale = 0;
  bool polishing = false;
  for (int it = 0; it < 300 && stale < 5; ++it) {
    const Jet2 e = local(x2, x4);
    const double grad_b = gradient_norm(e, x2, x4);
    if (grad_b < best_grad) {
      best_grad = grad_b;
      best2 = x2;
      best4 = x4;
      stale = 0;
    } else if (polishing) {
      ++stale;
    }
    if (grad_b <= 1e-13) break;

    const double det = e.h[0][0] * e.h[1][1] - e.h[0][1] * e.h[1][0];
    std::array<double, 2> newton{};
    const bool convex = e.h[0][0] > 0.0 && det > 0.0;
    if (convex) {
      newton = {-(e.h[1][1] * e.g[0] - e.h[0][1] * e.g[1]) / det,
                -(e.h[0][0] * e.g[1] - e.h[1][0] * e.g[0]) / det};
    }
    const double gn = std::hypot(e.g[0], e.g[1]);
    const std::array<double, 2> steepest{-e.g[0] / gn * 0.1 * std::min(x2, x4),
                                         -e.g[1] / gn * 0.1 * std::min(x2, x4)};

    bool moved = false;
    for (int pass = convex ? 0 : 1; pass < 2 && !moved; ++pass) {
      const auto& p = pass == 0 ? newton : steepest;
      const double slope = e.g[0] * p[0] + e.g[1] * p[1];
      if (!(slope < 0.0)) continue;
      // Below the rounding level of E, judge Newton steps by the gradient instead.
      const bool tiny = pass == 0 && -slope <= 1e-12 * std::abs(e.v);
      polishing = polishing || tiny;
      double alpha = 1.0;
      for (int tries = 0; tries < 60; ++tries, alpha *= 0.5) {
        const double n2 = x2 + alpha * p[0];
        const double n4 = x4 + alpha * p[1];
        if (!strictly_inside(l, sqrt(std::max(n2, 0.0)), sqrt(std::max(n4, 0.0)))) continue;
        const bool accept = tiny ? gradient_norm(local(n2, n4), n2, n4) < grad_b
                                 : energy(a, q, sqrt(n2), sqrt(n4)) <=
                                       e.v + 1e-4 * alpha * slope + 1e-15 * std::abs(e.v);
        if (accept) {
          moved = n2 != x2 || n4 != x4;
          x2 = n2;
          x4 = n4;
          break;
        }
      }
    }
    if (!moved) break;
  }
  return finish(l, q, sqrt(best2), sqrt(best4));
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r);
  return buf;
}

double golden_section(const std::function<double(double)>& g, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double gc = g(c);
  double gd = g(d);
  while (hi - lo > tol) {
    if (gc < gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - inv_phi * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + inv_phi * (hi - lo);
      gd = g(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Newton descent started from the minimizer of slice k, nudged strictly inside.
Minimum polish_slice_minimum(const ConvexRegion& region, const ChargeVector& q, double k) {
  const SliceMinimizer sm = slice_minimize(region, q, k);
  double b2 = std::sqrt(sm.x2);
  double b4 = sm.k;
  if (!strictly_inside(region.linkage(), b2, b4)) {
    const double b4_mid = region.k_at(0.5);
    const double b2_mid = region.b2_range(b4_mid).mid();
    for (double w = 1e-6; w <= 1.0 && !strictly_inside(region.linkage(), b2, b4); w *= 2.0) {
      b2 = std::sqrt(sm.x2) + w * (b2_mid - std::sqrt(sm.x2));
      b4 = sm.k + w * (b4_mid - sm.k);
    }
  }
  return newton_descent(region.linkage(), q, b2, b4);
}

// Newton descent, falling back to a downhill search along the polar curve
// from the current slice when the iterate gets pinned against the boundary.
Minimum descend_normalized(const Linkage& l, const ChargeVector& q, double b2, double b4) {
  Minimum m = newton_descent(l, q, b2, b4);
  if (stationary(l, q, m, 1e-8)) return m;

  const ConvexRegion region(l);
  const Interval K = region.k_range();
  auto g = [&](double k) { return slice_minimize(region, q, k).E; };
  const double k0 = std::clamp(m.b4, K.lo, K.hi);
  double h = 1e-3 * K.width();
  const double g0 = g(k0);
  double dir = 0.0;
  if (k0 + h <= K.hi && g(k0 + h) < g0) dir = 1.0;
  else if (k0 - h >= K.lo && g(k0 - h) < g0) dir = -1.0;
  double lo = std::max(k0 - h, K.lo);
  double hi = std::min(k0 + h, K.hi);
  if (dir != 0.0) {
    double prev = k0;
    double cur = k0 + dir * h;
    double g_cur = g(cur);
    for (;;) {
      h *= 2.0;
      const double next = std::clamp(cur + dir * h, K.lo, K.hi);
      const double g_next = g(next);
      if (next == cur || g_next >= g_cur) {
        lo = std::min(prev, next);
        hi = std::max(prev, next);
        break;
      }
      prev = cur;
      cur = next;
      g_cur = g_next;
      if (cur == K.lo || cur == K.hi) {
        lo = std::min(prev, cur);
        hi = std::max(prev, cur);
        break;
      }
    }
  }
  m = polish_slice_minimum(region, q, golden_section(g, lo, hi, 1e-10 * K.width()));
  if (!stationary(l, q, m, 1e-8))
    throw Error(ErrorCode::NumericalConditioning, "descent stalled away from a stationary point (residual " + format_residual(m.residual) + ")");
  return m;
}

Minimum rescale(Minimum m, double factor) {
  m.configuration = m.configuration.scaled(factor);
  m.E /= factor;
  m.b2 *= factor;
  m.b4 *= factor;
  return m;
}

}  // namespace

ChargeVector::ChargeVector(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) throw Error(ErrorCode::InvalidArgument, "no charges given");
  for (double v : q_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "charges must be finite");
}

bool ChargeVector::all_positive() const {
  return std::all_of(q_.begin(), q_.end(), [](double v) { return v > 0.0; });
}

ChargeVector pentagon_charges(double q1, double q2, double q4, double s, double t) {
  return ChargeVector({q1, q2, t, q4, s});
}

double diagonal_charge(const ChargeVector& q, std::size_t m) { return q.c((m + 4) % 5, (m + 1) % 5); }

EnergyReport effective_potential(const DiagonalCoords& x, const ChargeVector& q) {
  require_pentagon_charges(q);
  for (double v : x)
    if (!(v > 0.0)) throw Error(ErrorCode::DegenerateDistance, "diagonal of zero length");
  EnergyReport r;
  for (std::size_t m = 0; m < 5; ++m) r.E += diagonal_charge(q, m) / std::sqrt(x[m]);
  r.gradient = ambient_gradient(x, q);
  return r;
}

double effective_potential(const Configuration& p, const ChargeVector& q) {
  const std::size_t n = p.size();
  if (q.size() != n) throw Error(ErrorCode::InvalidArgument, "one charge per vertex required");
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const double d = distance(p[i], p[j]);
      if (!(d > 0.0)) throw Error(ErrorCode::DegenerateDistance, "coincident vertices");
      e += q.c(i, j) / d;
    }
  return e;
}

double full_potential(const Configuration& p, const ChargeVector& q) {
  const std::size_t n = p.size();
  if (q.size() != n) throw Error(ErrorCode::InvalidArgument, "one charge per vertex required");
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(p[i], p[j]);
      if (!(d > 0.0)) throw Error(ErrorCode::DegenerateDistance, "coincident vertices");
      e += q.c(i, j) / d;
    }
  return e;
}

SliceDerivatives slice_derivatives(const Linkage& l, const ChargeVector& q, double k, double x2) {
  require_pentagon_charges(q);
  const Interval r = convex_b2_range(l, k);
  const double b2 = std::sqrt(std::max(x2, 0.0));
  if (r.empty() || !(b2 > r.lo && b2 < r.hi))
    throw Error(ErrorCode::BoundarySlicePoint, "x2 is not inside the slice");
  const auto a = l.pentagon_sides();
  return {slice_first(a, q, x2, k), slice_second(a, q, x2, k)};
}

SliceMinimizer slice_minimize(const ConvexRegion& region, const ChargeVector& q, double k) {
  require_pentagon_charges(q);
  const auto a = region.linkage().pentagon_sides();
  const Slice s = region.slice(k);
  const double lo = s.x2_range.lo;
  const double hi = s.x2_range.hi;
  auto at = [&](double x2, bool boundary) {
    return SliceMinimizer{s.k, x2, boundary, energy(a, q, std::sqrt(x2), s.k)};
  };
  if (!(hi > lo)) return at(lo, true);

  const double delta = 1e-9 * (hi - lo);
  double left = lo + delta;
  double right = hi - delta;
  if (slice_first(a, q, left, s.k) >= 0.0) return at(lo, true);
  if (slice_first(a, q, right, s.k) <= 0.0) return at(hi, true);

  double x = 0.5 * (left + right);
  for (int it = 0; it < 200; ++it) {
    const double f = slice_first(a, q, x, s.k);
    if (f == 0.0) break;
    (f > 0.0 ? right : left) = x;
    const double f2 = slice_second(a, q, x, s.k);
    double next = x - f / f2;
    if (!(f2 > 0.0) || !(next > left && next < right)) next = 0.5 * (left + right);
    const bool done = std::abs(next - x) <= 1e-15 * hi || right - left <= 1e-15 * hi;
    x = next;
    if (done) break;
  }
  // On the slice b4 = a3 + a4 the vertex A4 is straight throughout.
  const bool straight_a4 = s.k >= a[2] + a[3] - 1e-12 * region.linkage().scale();
  return at(x, straight_a4);
}

SliceMinimizer slice_minimize(const Linkage& l, const ChargeVector& q, double k) {
  return slice_minimize(ConvexRegion(l), q, k);
}

PolarCurve trace_polar_curve(const Linkage& l, const ChargeVector& q, const std::vector<double>& k_grid) {
  const ConvexRegion region(l);
  PolarCurve curve;
  for (double k : k_grid) curve.points.push_back(slice_minimize(region, q, k));
  std::size_t i = 0;
  while (i < curve.points.size()) {
    if (curve.points[i].on_boundary) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < curve.points.size() && !curve.points[j].on_boundary) ++j;
    curve.components.emplace_back(i, j);
    i = j;
  }
  return curve;
}

double stationarity_residual(const Configuration& p, const ChargeVector& q) {
  require_pentagon_charges(q);
  if (p.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon expected");
  const Configuration n = p.scaled(1.0 / p.scale());
  const auto g = chart_gradient(n, q);
  const auto x = diagonals(n);
  return std::hypot(2.0 * std::sqrt(x[1]) * g[0], 2.0 * std::sqrt(x[3]) * g[1]);
}

Minimum descend(const Linkage& l, const ChargeVector& q, double b2, double b4) {
  require_pentagon_charges(q);
  const double f = 1.0 / l.scale();
  const Linkage n = l.scaled(f);
  if (!strictly_inside(n, b2 * f, b4 * f))
    throw Error(ErrorCode::NotConvex, "starting point is not strictly convex");
  return rescale(descend_normalized(n, q, b2 * f, b4 * f), 1.0 / f);
}

Minimum global_min_convex(const Linkage& l, const ChargeVector& q) {
  require_pentagon_charges(q);
  if (l.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagonal linkage expected");
  if (!q.all_positive()) throw Error(ErrorCode::NonPositiveCharge, "all charges must be positive");
  if (is_nongeneric(l)) throw Error(ErrorCode::NongenericLinkage, "linkage is not generic");

  const double f = 1.0 / l.scale();
  const ConvexRegion region(l.scaled(f));
  const Interval K = region.k_range();
  auto g = [&](double k) { return slice_minimize(region, q, k).E; };

  constexpr int kScan = 64;
  int best = 0;
  double best_e = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double e = g(region.k_at(static_cast<double>(i) / kScan));
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  const double k = golden_section(g, region.k_at(std::max(best - 1, 0) / static_cast<double>(kScan)),
                                  region.k_at(std::min(best + 1, kScan) / static_cast<double>(kScan)),
                                  1e-10 * K.width());
  Minimum m = polish_slice_minimum(region, q, k);
  if (!stationary(region.linkage(), q, m, 1e-9))
    throw Error(ErrorCode::NumericalConditioning, "minimum could not be polished to stationarity (residual " + format_residual(m.residual) + ")");
  return rescale(std::move(m), 1.0 / f);
}

UniquenessReport verify_unique_min(const Linkage& l, const ChargeVector& q, std::size_t grid) {
  require_pentagon_charges(q);
  const ConvexRegion region(l.scaled(1.0 / l.scale()));
  const auto a = region.linkage().pentagon_sides();
  const std::size_t n = grid;
  std::vector<double> e(n * n, std::numeric_limits<double>::infinity());
  std::vector<double> ks(n);
  UniquenessReport report;
  report.grid = n;
  std::vector<Interval> ranges(n);
  double b2_lo = std::numeric_limits<double>::infinity();
  double b2_hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = region.k_at((i + 0.5) / static_cast<double>(n));
    ranges[i] = region.b2_range(ks[i]);
    if (ranges[i].empty()) continue;
    b2_lo = std::min(b2_lo, ranges[i].lo);
    b2_hi = std::max(b2_hi, ranges[i].hi);
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Interval& r = ranges[i];
    if (r.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double b2 = b2_lo + (j + 0.5) / static_cast<double>(n) * (b2_hi - b2_lo);
      if (!(b2 > r.lo && b2 < r.hi)) continue;
      e[i * n + j] = energy(a, q, b2, ks[i]);
      if (e[i * n + j] < lowest) {
        lowest = e[i * n + j];
        report.best = place(a, b2, ks[i]).scaled(l.scale());
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = e[i * n + j];
      if (!std::isfinite(v)) continue;
      bool strict = true;
      for (int di = -1; di <= 1 && strict; ++di)
        for (int dj = -1; dj <= 1 && strict; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long ii = static_cast<long>(i) + di;
          const long jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(n) || jj >= static_cast<long>(n)) continue;
          if (!(v < e[ii * n + jj])) strict = false;
        }
      if (strict) candidates.push_back({i, j});
    }
  report.grid_minima = candidates.size();
  std::vector<Configuration> limits;
  for (const auto& [i, j] : candidates) {
    const double b2 = b2_lo + (j + 0.5) / static_cast<double>(n) * (b2_hi - b2_lo);
    try {
      const Configuration c = descend_normalized(region.linkage(), q, b2, ks[i]).configuration;
      if (std::none_of(limits.begin(), limits.end(), [&](const Configuration& o) { return vertex_distance(o, c) <= 1e-6; }))
        limits.push_back(c);
    } catch (const Error&) {
      limits.push_back(place(a, b2, ks[i]));
    }
  }
  report.local_minima = limits.size();

  const PolarCurve curve = trace_polar_curve(region.linkage(), q, ks);
  for (const auto& [begin, end] : curve.components) {
    std::size_t changes = 0;
    int last = 0;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double d = curve.points[i].E - curve.points[i - 1].E;
      const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (sign != 0 && last != 0 && sign != last) ++changes;
      if (sign != 0) last = sign;
    }
    report.max_component_extrema = std::max(report.max_component_extrema, changes);
  }
  return report;
}

}  // namespace linkcharge
