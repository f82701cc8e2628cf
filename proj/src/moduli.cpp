#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "linkcharge/error.hpp"
#include "linkcharge/moduli.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/region.hpp"

namespace linkcharge {

namespace {

constexpr double kPi = std::numbers::pi;

double law_of_cosines(double a, double b, double angle) {
  return std::sqrt(std::max(0.0, a * a + b * b - 2.0 * a * b * std::cos(angle)));
}

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

Point2 to_point(const placement::Vec<double>& v) { return {v.x, v.y}; }

// Diagonal |Q1Q3| of the quadrilateral whose diagonal |Q2Q4| is f, with Q1 and
// Q3 on opposite sides of Q2Q4 unless same_side.
double other_diagonal(const std::array<double, 4>& p, double f, bool same_side) {
  using placement::Vec;
  const double tol = 1e-12 * f * f + 1e-300;
  const Vec<double> q2{0.0, 0.0};
  const Vec<double> q4{f, 0.0};
  const Vec<double> q1 = placement::apex(q2, q4, p[0], p[3], 1.0, tol);
  const Vec<double> q3 = placement::apex(q2, q4, p[1], p[2], same_side ? 1.0 : -1.0, tol);
  return std::sqrt(placement::squared_norm(q3 - q1));
}

// Interior angles of Q1Q2Q3Q4 with |Q1Q3| = e, Q2 and Q4 on opposite sides of
// Q1Q3, all strictly below their budgets.
bool quad_angles_within(const std::array<double, 4>& p, const std::array<double, 4>& budget, double e) {
  using placement::Vec;
  const double tol = 1e-12 * e * e + 1e-300;
  const Vec<double> q1{0.0, 0.0};
  const Vec<double> q3{e, 0.0};
  const std::array<Vec<double>, 4> q{q1, placement::apex(q1, q3, p[0], p[1], -1.0, tol), q3,
                                     placement::apex(q1, q3, p[3], p[2], 1.0, tol)};
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec<double> in = q[i] - q[(i + 3) % 4];
    const Vec<double> out = q[(i + 1) % 4] - q[i];
    const double turn = std::atan2(in.x * out.y - in.y * out.x, in.x * out.x + in.y * out.y);
    if (!(kPi - turn < budget[i])) return false;
  }
  return true;
}

ShapeStatus classify(const Configuration& c) {
  const double margin = convexity_margin(c);
  const double tol = convexity_tolerance(c);
  if (margin > tol && is_strictly_convex(c)) return ShapeStatus::StrictlyConvex;
  if (margin >= -tol) return ShapeStatus::Boundary;
  throw Error(ErrorCode::NotConvex, "configuration not strictly convex");
}

std::size_t diagonal_index(std::size_t u, std::size_t v) {
  // Diagonal m joins m-1 and m+1.
  if ((u + 2) % 5 == v) return (u + 1) % 5;
  return (v + 1) % 5;
}

}  // namespace

Linkage::Linkage(std::vector<double> sides) : sides_(std::move(sides)) {
  if (sides_.size() != 4 && sides_.size() != 5)
    throw Error(ErrorCode::InvalidLinkage, "linkage must have 4 or 5 sides");
  double total = 0.0;
  for (double s : sides_) {
    if (!std::isfinite(s) || s <= 0.0)
      throw Error(ErrorCode::InvalidLinkage, "sidelengths must be positive and finite");
    total += s;
  }
  for (double s : sides_)
    if (s >= total - s)
      throw Error(ErrorCode::InvalidLinkage,
                  "every side must be shorter than the sum of the others");
  scale_ = *std::max_element(sides_.begin(), sides_.end());
}

Linkage Linkage::equilateral(std::size_t n, double side) {
  return Linkage(std::vector<double>(n, side));
}

Linkage Linkage::scaled(double factor) const {
  std::vector<double> s = sides_;
  for (double& v : s) v *= factor;
  return Linkage(std::move(s));
}

std::array<double, 5> Linkage::pentagon_sides() const {
  if (size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagonal linkage required");
  return {sides_[0], sides_[1], sides_[2], sides_[3], sides_[4]};
}

std::array<double, 4> Linkage::quad_sides() const {
  if (size() != 4) throw Error(ErrorCode::InvalidArgument, "quadrilateral linkage required");
  return {sides_[0], sides_[1], sides_[2], sides_[3]};
}

Configuration Configuration::scaled(double factor) const {
  Configuration c = *this;
  for (Point2& p : c.vertices) p = factor * p;
  return c;
}

Linkage linkage_of(const Configuration& p) {
  std::vector<double> sides;
  for (std::size_t i = 0; i < p.size(); ++i) sides.push_back(distance(p[i], p[i + 1]));
  return Linkage(std::move(sides));
}

double Configuration::scale() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s = std::max(s, distance((*this)[i], (*this)[i + 1]));
  return s;
}

double vertex_distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "vertex counts differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, distance(a[i], b[i]));
  return d;
}

Configuration canonicalize(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw Error(ErrorCode::InvalidArgument, "at least three vertices required");
  const Point2 origin = vertices[0];
  for (Point2& p : vertices) p = p - origin;
  std::size_t ref = 1;
  while (ref < vertices.size() && norm(vertices[ref]) == 0.0) ++ref;
  if (ref == vertices.size()) throw Error(ErrorCode::DegenerateInput, "all points coincide");
  const double angle = std::atan2(vertices[ref].y, vertices[ref].x);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Point2& p : vertices) p = {c * p.x + s * p.y, -s * p.x + c * p.y};
  vertices[0] = {0.0, 0.0};
  if (ref == 1) vertices[1].y = 0.0;
  Configuration out{std::move(vertices)};
  if (polygon_signed_area(out) < 0.0)
    for (Point2& p : out.vertices) p.y = -p.y;
  return out;
}

double polygon_signed_area(const Configuration& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[i + 1]);
  return 0.5 * a;
}

double convexity_margin(const Configuration& p) {
  const double orient = polygon_signed_area(p) < 0.0 ? -1.0 : 1.0;
  const std::size_t n = p.size();
  double margin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double turn = cross(p[i] - p[i + n - 1], p[i + 1] - p[i]);
    margin = std::min(margin, orient * turn);
  }
  return margin;
}

double convexity_tolerance(const Configuration& p) {
  const double s = p.scale();
  return 1e-10 * s * s;
}

bool is_strictly_convex(const Configuration& p) {
  if (convexity_margin(p) <= convexity_tolerance(p)) return false;
  // Same-sign turns also describe star polygons; require a single winding.
  const std::size_t n = p.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 u = p[i] - p[i + n - 1];
    const Point2 v = p[i + 1] - p[i];
    turning += std::atan2(cross(u, v), dot(u, v));
  }
  return std::abs(std::abs(turning) - 2.0 * kPi) < 1e-6;
}

bool is_weakly_convex(const Configuration& p) {
  return convexity_margin(p) >= -convexity_tolerance(p);
}

bool realizes(const Linkage& l, const Configuration& p, double rel_tol) {
  if (l.size() != p.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::abs(distance(p[i], p[i + 1]) - l.side(i)) > rel_tol * l.scale()) return false;
  return true;
}

DiagonalCoords diagonals(const Configuration& p) {
  if (p.size() != 5) throw Error(ErrorCode::InvalidArgument, "diagonals() needs a pentagon");
  DiagonalCoords x;
  for (std::size_t m = 0; m < 5; ++m) x[m] = squared_distance(p[m + 4], p[m + 1]);
  return x;
}

bool is_nongeneric(const Linkage& l) {
  const std::size_t n = l.size();
  const double tol = 1e-9 * l.scale();
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    double sum = l.side(0);
    for (std::size_t i = 1; i < n; ++i) sum += (mask >> (i - 1) & 1u) ? -l.side(i) : l.side(i);
    if (std::abs(sum) <= tol) return true;
  }
  if (n == 5) {
    const ConvexRegion region(l);
    for (int i = 1; i < 256; ++i) {
      const Interval r = region.b2_range(region.k_at(i / 256.0));
      if (r.empty() || r.width() <= tol) return true;
    }
  }
  return false;
}

Reconstruction reconstruct_pentagon(const Linkage& l, double b2, double b4) {
  const auto a = l.pentagon_sides();
  const double tol = 1e-12 * l.scale();
  auto check = [tol](double p, double q, double r, const char* what) {
    if (r > p + q + tol || r < std::abs(p - q) - tol || r <= 0.0)
      throw Error(ErrorCode::NotRealizable, std::string("triangle inequality fails for ") + what);
  };
  check(a[0], a[1], b2, "A1A2A3");
  check(b2, a[4], b4, "A1A3A5");
  check(a[2], a[3], b4, "A3A4A5");
  const auto v = placement::pentagon(a, b2, b4, 1e-9 * l.scale() * l.scale());
  Configuration c;
  for (const auto& p : v) c.vertices.push_back(to_point(p));
  return {c, classify(c)};
}

Interval quad_diagonal_range(const std::array<double, 4>& p, const std::array<double, 4>& budget) {
  const double lo = std::max(std::abs(p[0] - p[1]), std::abs(p[2] - p[3]));
  const double hi = std::min(p[0] + p[1], p[2] + p[3]);
  if (lo > hi) return {0.0, -1.0};

  // Every vertex angle is continuous in e, so convexity can only switch where
  // some angle meets its budget.
  std::vector<double> cuts{lo, hi, law_of_cosines(p[0], p[1], budget[1]),
                           law_of_cosines(p[2], p[3], budget[3])};
  const double f_min = std::max(std::abs(p[0] - p[3]), std::abs(p[1] - p[2]));
  const double f_max = std::min(p[0] + p[3], p[1] + p[2]);
  for (double f : {law_of_cosines(p[3], p[0], budget[0]), law_of_cosines(p[1], p[2], budget[2])}) {
    const double slack = 1e-12 * (f_max + 1.0);
    if (f < f_min - slack || f > f_max + slack) continue;
    f = std::clamp(f, f_min, f_max);
    cuts.push_back(other_diagonal(p, f, false));
    cuts.push_back(other_diagonal(p, f, true));
  }
  std::erase_if(cuts, [&](double c) { return !(c >= lo && c <= hi); });
  std::sort(cuts.begin(), cuts.end());

  Interval r{0.0, -1.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    if (!quad_angles_within(p, budget, 0.5 * (cuts[i] + cuts[i + 1]))) continue;
    if (r.empty()) r.lo = cuts[i];
    r.hi = cuts[i + 1];
  }
  return r;
}

Interval convex_b2_range(const Linkage& l, double k) {
  const auto a = l.pentagon_sides();
  const double tol = 1e-12 * l.scale();
  if (k <= 0.0 || k < std::abs(a[2] - a[3]) - tol || k > a[2] + a[3] + tol) return {0.0, -1.0};
  const double theta3 = clamped_acos((a[2] * a[2] + k * k - a[3] * a[3]) / (2.0 * a[2] * k));
  const double theta5 = clamped_acos((a[3] * a[3] + k * k - a[2] * a[2]) / (2.0 * a[3] * k));
  return quad_diagonal_range({a[0], a[1], k, a[4]}, {kPi, kPi, kPi - theta3, kPi - theta5});
}

Interval admissible_k(const Linkage& l) {
  const auto a = l.pentagon_sides();
  const double k0 = std::abs(a[2] - a[3]);
  const double k1 = a[2] + a[3];
  auto feasible = [&](double k) { return !convex_b2_range(l, k).empty(); };

  constexpr int kScan = 1024;
  int first = -1;
  int last = -1;
  for (int i = 0; i <= kScan; ++i) {
    if (feasible(k0 + (k1 - k0) * i / kScan)) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) throw Error(ErrorCode::EmptyModuli, "linkage has no convex configurations");

  auto bisect = [&](double bad, double good) {
    for (int it = 0; it < 200 && std::abs(good - bad) > 1e-16 * k1; ++it) {
      const double mid = 0.5 * (bad + good);
      (feasible(mid) ? good : bad) = mid;
    }
    return good;
  };
  Interval r;
  r.lo = first == 0 ? k0 : bisect(k0 + (k1 - k0) * (first - 1) / kScan, k0 + (k1 - k0) * first / kScan);
  r.hi = last == kScan ? k1 : bisect(k0 + (k1 - k0) * (last + 1) / kScan, k0 + (k1 - k0) * last / kScan);
  return r;
}

ConvexRegion::ConvexRegion(Linkage linkage)
    : linkage_(std::move(linkage)), k_range_(admissible_k(linkage_)) {}

Slice ConvexRegion::slice(double k) const {
  const double scale = linkage_.scale();
  const double tol = 1e-12 * scale;
  if (k < k_range_.lo - tol || k > k_range_.hi + tol)
    throw Error(ErrorCode::EmptySlice, "b4 = " + std::to_string(k) + " is not admissible");
  const bool at_end = std::abs(k - k_range_.lo) <= tol || std::abs(k - k_range_.hi) <= tol;
  const double kk = std::clamp(k, k_range_.lo, k_range_.hi);
  Interval b2 = convex_b2_range(linkage_, kk);
  Slice s;
  s.k = kk;
  if (b2.empty() || (at_end && b2.width() <= 1e-6 * scale)) {
    if (b2.empty() && !at_end && b2.lo - b2.hi > 1e-9 * scale)
      throw Error(ErrorCode::EmptySlice, "slice is empty");
    if (b2.empty() && at_end) {
      const double inward = kk - k_range_.lo <= k_range_.hi - kk ? 1.0 : -1.0;
      for (double h = 1e-12 * scale; b2.empty() && h <= 1e-6 * scale; h *= 10.0)
        b2 = convex_b2_range(linkage_, kk + inward * h);
    }
    const double m = b2.mid();
    b2 = {m, m};
    s.terminal = at_end;
  }
  s.x2_range = {b2.lo * b2.lo, b2.hi * b2.hi};
  return s;
}

Slice slice_range(const Linkage& l, double k) { return ConvexRegion(l).slice(k); }

SquaredDistances4 pentagon_quadruple(const DiagonalCoords& x, const Linkage& l, std::size_t removed) {
  std::array<std::size_t, 4> v{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < 5; ++i)
    if (i != removed) v[n++] = i;
  SquaredDistances4 d;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const std::size_t u = v[i];
      const std::size_t w = v[j];
      double value;
      if ((u + 1) % 5 == w) {
        value = l.side(u) * l.side(u);
      } else if ((w + 1) % 5 == u) {
        value = l.side(w) * l.side(w);
      } else {
        value = x[diagonal_index(u, w)];
      }
      d.set(i, j, value);
    }
  return d;
}

ConstraintSet cm_constraints(const DiagonalCoords& x, const Linkage& l) {
  if (l.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagonal linkage required");
  ConstraintSet out;
  for (std::size_t r = 0; r < 5; ++r) {
    const SquaredDistances4 d = pentagon_quadruple(x, l, r);
    out.values[r] = cayley_menger(d);
    std::array<std::size_t, 4> v{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 5; ++i)
      if (i != r) v[n++] = i;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        const std::size_t u = v[i];
        const std::size_t w = v[j];
        if ((u + 1) % 5 == w || (w + 1) % 5 == u) continue;
        out.gradients[r][diagonal_index(u, w)] = cayley_menger_partial(d, i, j);
      }
  }
  return out;
}

QuadCurvePoint quad_psi(const Configuration& p) {
  if (p.size() != 4) throw Error(ErrorCode::InvalidArgument, "quad_psi needs a quadrilateral");
  return {squared_distance(p[0], p[2]), squared_distance(p[1], p[3])};
}

double quad_curve_residual(const Linkage& l, double x, double y) {
  const auto a = l.quad_sides();
  return cayley_menger(SquaredDistances4(a[0] * a[0], x, a[3] * a[3], a[1] * a[1], y, a[2] * a[2]));
}

Interval quad_convex_range(const Linkage& l) {
  return quad_diagonal_range(l.quad_sides(), {kPi, kPi, kPi, kPi});
}

Reconstruction reconstruct_quad(const Linkage& l, double d13) {
  const auto a = l.quad_sides();
  const double tol = 1e-12 * l.scale();
  if (d13 > a[0] + a[1] + tol || d13 < std::abs(a[0] - a[1]) - tol || d13 > a[2] + a[3] + tol ||
      d13 < std::abs(a[2] - a[3]) - tol || d13 <= 0.0)
    throw Error(ErrorCode::NotRealizable, "triangle inequality fails for the diagonal A1A3");
  const auto v = placement::quadrilateral(a, d13, 1e-9 * l.scale() * l.scale());
  Configuration c;
  for (const auto& p : v) c.vertices.push_back(to_point(p));
  return {c, classify(c)};
}

std::vector<ConvexSample> sample_convex(const Linkage& l, std::size_t nk, std::size_t nx) {
  if (nk == 0 || nx == 0) throw Error(ErrorCode::InvalidArgument, "sample counts must be positive");
  const ConvexRegion region(l);
  std::vector<ConvexSample> out;
  out.reserve(nk * nx);
  for (std::size_t i = 0; i < nk; ++i) {
    const double k = region.k_at((i + 0.5) / static_cast<double>(nk));
    const Interval r = region.b2_range(k);
    if (r.empty()) continue;
    for (std::size_t j = 0; j < nx; ++j) {
      const double b2 = r.lo + (j + 0.5) / static_cast<double>(nx) * r.width();
      try {
        Reconstruction rec = reconstruct_pentagon(l, b2, k);
        if (rec.status == ShapeStatus::StrictlyConvex) out.push_back({k, b2 * b2, std::move(rec.configuration)});
      } catch (const Error&) {
      }
    }
  }
  if (out.empty()) throw Error(ErrorCode::EmptyModuli, "no convex samples");
  return out;
}

}  // namespace linkcharge
