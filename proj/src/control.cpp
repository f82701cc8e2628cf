#include "linkcharge/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "linkcharge/error.hpp"
#include "linkcharge/jet.hpp"
#include "linkcharge/placement.hpp"
#include "linkcharge/stabilizer.hpp"

namespace linkcharge {

namespace {

constexpr double kContinuityFactor = 50.0;
constexpr std::size_t kMaxRefinement = 16;
constexpr std::size_t kContinuityRadius = 8;

Configuration require_member(const Linkage& l, const Configuration& p) {
  if (p.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon expected");
  Configuration c = canonicalize(p.vertices);
  if (!is_strictly_convex(c)) throw Error(ErrorCode::NotConvex, "configuration not strictly convex");
  if (!realizes(l, c, 1e-6)) throw Error(ErrorCode::InvalidArgument, "configuration does not realize the linkage");
  return c;
}

TrajectoryStep make_step(ChargePoint c, const Minimum& m) {
  return {c, m.configuration, m.E, m.residual};
}

// Boundary stratum where vertex j is straight: the four-bar with the two
// sides at j merged, parametrized by its diagonal from A_{j+1} to A_{j+3}.
struct Stratum {
  std::size_t j = 0;
  std::array<double, 4> sides{};
  double fraction = 0.0;  // position of A_j along A_{j-1} -> A_{j+1}
  Interval range;
};

Stratum stratum(const Linkage& l, std::size_t j) {
  Stratum s;
  s.j = j;
  const double before = l.side(j + 4);
  s.sides = {l.side(j + 1), l.side(j + 2), l.side(j + 3), before + l.side(j)};
  s.fraction = before / s.sides[3];
  if (s.sides[3] >= s.sides[0] + s.sides[1] + s.sides[2]) return s;
  const double pi = std::numbers::pi;
  s.range = quad_diagonal_range(s.sides, {pi, pi, pi, pi});
  return s;
}

struct StratumValue {
  double gradient = 0.0;
  Configuration configuration;
};

StratumValue evaluate(const Stratum& st, const ChargeVector& q, double e) {
  using J = Jet<1>;
  using V = placement::Vec<J>;
  using std::sqrt;
  const auto quad = placement::quadrilateral(st.sides, J::variable(e, 0), 1e-12);
  std::array<V, 5> v;
  for (std::size_t i = 0; i < 4; ++i) v[(st.j + 1 + i) % 5] = quad[i];
  const V& from = quad[3];
  const V& to = quad[0];
  v[st.j] = {from.x + (to.x - from.x) * J(st.fraction), from.y + (to.y - from.y) * J(st.fraction)};
  const auto x = placement::pentagon_diagonals(v);
  J energy(0.0);
  double speed = 0.0;
  for (std::size_t m = 0; m < 5; ++m) {
    energy = energy + J(diagonal_charge(q, m)) / sqrt(x[m]);
    speed += x[m].g[0] * x[m].g[0];
  }
  StratumValue r;
  r.gradient = std::abs(energy.g[0]) / std::sqrt(speed);
  for (const auto& p : v) r.configuration.vertices.push_back({p.x.v, p.y.v});
  r.configuration = canonicalize(r.configuration.vertices);
  return r;
}

}  // namespace

ChargePath::ChargePath(std::vector<ChargePoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw Error(ErrorCode::InvalidChargePath, "charge path has no waypoints");
  for (const auto& w : waypoints_)
    if (!(w.s > 0.0 && w.t > 0.0 && std::isfinite(w.s) && std::isfinite(w.t)))
      throw Error(ErrorCode::InvalidChargePath, "charge path leaves the positive quadrant");
}

ChargePath ChargePath::segment(ChargePoint from, ChargePoint to, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");
  std::vector<ChargePoint> w;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(steps);
    w.push_back({from.s + u * (to.s - from.s), from.t + u * (to.t - from.t)});
  }
  w.back() = to;
  return ChargePath(std::move(w));
}

ChargePath ChargePath::refined(std::size_t factor) const {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "refinement factor must be positive");
  std::vector<ChargePoint> w{waypoints_.front()};
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    const ChargePath leg = segment(waypoints_[i - 1], waypoints_[i], factor);
    w.insert(w.end(), leg.waypoints().begin() + 1, leg.waypoints().end());
  }
  return ChargePath(std::move(w));
}

Trajectory lift_path(const Linkage& l, const ChargePath& path, const FixedCharges& fixed, const Configuration& start) {
  const Configuration p0 = require_member(l, start);
  const auto& w = path.waypoints();
  if (stationarity_residual(p0, fixed.with(w.front())) > 1e-6)
    throw Error(ErrorCode::InvalidArgument, "start is not critical for the first charges");

  Trajectory traj;
  auto solve = [&](ChargePoint c, const Configuration& seed) {
    const ChargeVector q = fixed.with(c);
    const DiagonalCoords x = diagonals(seed);
    try {
      Minimum m = descend(l, q, std::sqrt(x[1]), std::sqrt(x[3]));
      if (is_strictly_convex(m.configuration)) return m;
    } catch (const Error&) {
    }
    return global_min_convex(l, q);
  };
  traj.steps.push_back(make_step(w.front(), solve(w.front(), p0)));
  std::vector<double> moves;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const Minimum m = solve(w[i], traj.steps.back().configuration);
    if (!is_strictly_convex(m.configuration))
      throw Error(ErrorCode::ContinuationBreak, "minimum left the convex region");
    moves.push_back(vertex_distance(m.configuration, traj.steps.back().configuration));
    traj.steps.push_back(make_step(w[i], m));
  }
  const std::size_t n = moves.size();
  const std::size_t window = std::min<std::size_t>(n, 2 * kContinuityRadius + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = std::min(i > kContinuityRadius ? i - kContinuityRadius : 0, n - window);
    std::vector<double> local(moves.begin() + first, moves.begin() + first + window);
    std::nth_element(local.begin(), local.begin() + window / 2, local.end());
    const double bound = std::max(kContinuityFactor * local[window / 2], 1e-9 * l.scale());
    if (moves[i] > bound)
      throw Error(ErrorCode::ContinuationBreak, "step " + std::to_string(i + 1) + " moved " +
                                                    std::to_string(moves[i]) + ", bound " + std::to_string(bound));
  }
  return traj;
}

Trajectory navigate(const Linkage& l, const Configuration& from, const Configuration& to, const FixedCharges& fixed,
                    std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");
  if (l.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagonal linkage expected");
  if (is_nongeneric(l)) throw Error(ErrorCode::NongenericLinkage, "linkage is not generic");
  const Configuration p0 = require_member(l, from);
  const Configuration p1 = require_member(l, to);
  const auto s0 = stabilize_pentagon(p0, fixed.q1, fixed.q2, fixed.q4);
  const auto s1 = stabilize_pentagon(p1, fixed.q1, fixed.q2, fixed.q4);
  const ChargePoint c0{s0.s, s0.t};
  const ChargePoint c1{s1.s, s1.t};

  Trajectory traj;
  if (vertex_distance(p0, p1) <= 1e-12 * l.scale()) {
    traj.steps.push_back({c0, p0, effective_potential(p0, s0.charges), s0.residual});
    return traj;
  }
  std::string last_error;
  for (std::size_t n = steps, retries = 0; n <= kMaxRefinement * steps; n *= 2, ++retries) {
    try {
      traj = lift_path(l, ChargePath::segment(c0, c1, n), fixed, p0);
      traj.retries = retries;
      traj.endpoint_error = vertex_distance(traj.steps.back().configuration, p1);
      return traj;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContinuationBreak) throw;
      last_error = e.what();
    }
  }
  throw Error(ErrorCode::ContinuationBreak, "continuation failed up to " + std::to_string(kMaxRefinement * steps) +
                                                " steps: " + last_error);
}

double tangential_gradient(const Linkage& l, const ChargeVector& q, const Configuration& p) {
  if (p.size() != 5 || l.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon expected");
  const double f = 1.0 / l.scale();
  const Linkage ln = l.scaled(f);
  const Configuration c = canonicalize(p.scaled(f).vertices);
  if (!is_weakly_convex(c)) throw Error(ErrorCode::NotConvex, "configuration is not convex");
  std::size_t straight = 5;
  double flattest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 5; ++i) {
    const double turn = std::abs(cross(c[i] - c[i + 4], c[i + 1] - c[i]));
    if (turn < flattest) {
      flattest = turn;
      straight = i;
    }
  }
  if (flattest > 1e-9) throw Error(ErrorCode::NotOnBoundary, "no straight vertex: configuration is interior");
  const Stratum st = stratum(ln, straight);
  return evaluate(st, q, distance(c[straight + 1], c[straight + 3])).gradient;
}

BoundaryScanReport boundary_criticality_scan(const Linkage& l, const ChargeVector& q, std::size_t samples) {
  if (l.size() != 5 || q.size() != 5) throw Error(ErrorCode::InvalidArgument, "pentagon expected");
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const Linkage ln = l.scaled(1.0 / l.scale());
  std::vector<Stratum> strata;
  for (std::size_t j = 0; j < 5; ++j) {
    Stratum s = stratum(ln, j);
    if (!s.range.empty() && s.range.width() > 0.0) strata.push_back(s);
  }
  if (strata.empty()) throw Error(ErrorCode::EmptyModuli, "convex region has no boundary strata");
  BoundaryScanReport r;
  r.min_tangential_gradient = std::numeric_limits<double>::infinity();
  const std::size_t per = (samples + strata.size() - 1) / strata.size();
  for (const Stratum& s : strata)
    for (std::size_t i = 0; i < per && r.samples < samples; ++i, ++r.samples) {
      const double e = s.range.lo + (i + 0.5) / static_cast<double>(per) * s.range.width();
      StratumValue v = evaluate(s, q, e);
      if (v.gradient < r.min_tangential_gradient) {
        r.min_tangential_gradient = v.gradient;
        r.argmin = v.configuration.scaled(l.scale());
        r.argmin_vertex = s.j;
      }
    }
  return r;
}

}  // namespace linkcharge
