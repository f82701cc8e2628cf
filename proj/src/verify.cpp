#include "linkcharge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "linkcharge/chart.hpp"
#include "linkcharge/control.hpp"
#include "linkcharge/error.hpp"
#include "linkcharge/geometry.hpp"
#include "linkcharge/potential.hpp"
#include "linkcharge/sampling.hpp"
#include "linkcharge/stabilizer.hpp"

namespace linkcharge::verify {

namespace {

constexpr double kPhi = std::numbers::phi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Tallies checks and keeps the worst observed value of some statistic.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  bool lower_is_worse = false;

  void check(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
  void observe(double v) {
    if (checks == 0 && worst == 0.0) worst = v;
    worst = lower_is_worse ? std::min(worst, v) : std::max(worst, v);
  }
};

Point3 random_point3(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

Point2 random_point2(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

ChargeVector random_charges(Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  return ChargeVector({u(rng), u(rng), u(rng), u(rng), u(rng)});
}

Configuration regular_pentagon() {
  return reconstruct_pentagon(Linkage::equilateral(5), kPhi, kPhi).configuration;
}

SuiteResult cm_derivative(Rng& rng) {
  Tally fd, planar;
  for (int i = 0; i < 1000; ++i) {
    const std::array<Point3, 4> p{random_point3(rng), random_point3(rng), random_point3(rng), random_point3(rng)};
    const double formula = cm_partial_x13(p);
    auto d = SquaredDistances4::from_points(p);
    const double x13 = d(0, 2);
    const double h = 1e-3;
    d.set(0, 2, x13 + h);
    const double up = cayley_menger(d);
    d.set(0, 2, x13 - h);
    const double down = cayley_menger(d);
    const double rel = std::abs((up - down) / (2 * h) - formula) / std::max(std::abs(formula), 1e-12);
    fd.observe(rel);
    fd.check(rel <= 1e-6);

    const std::array<Point2, 4> q{random_point2(rng), random_point2(rng), random_point2(rng), random_point2(rng)};
    const double cofactor = cayley_menger_partial(SquaredDistances4::from_points(q), 0, 2);
    const double areas = -32.0 * signed_area(q[0], q[1], q[3]) * signed_area(q[1], q[2], q[3]);
    const double err = std::abs(cofactor - areas);
    planar.observe(err);
    planar.check(err <= 1e-10);
  }
  return {1, "cm-derivative", fd.checks + planar.checks, fd.failures + planar.failures,
          "max rel FD error " + fmt(fd.worst) + ", max planar abs error " + fmt(planar.worst)};
}

SuiteResult cm_volume(Rng& rng) {
  Tally t;
  std::size_t rejected = 0;
  for (int i = 0; i < 1000;) {
    const std::array<Point3, 4> p{random_point3(rng), random_point3(rng), random_point3(rng), random_point3(rng)};
    const double v = dot(p[1] - p[0], cross(p[2] - p[0], p[3] - p[0])) / 6.0;
    double edge = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) edge = std::max(edge, std::sqrt(dot(p[a] - p[b], p[a] - p[b])));
    // Rounding the squared distances alone costs about eps * edge^6 / V^2.
    if (std::abs(v) < 1e-3 * edge * edge * edge) {
      ++rejected;
      continue;
    }
    ++i;
    const double expect = 288.0 * v * v;
    const double rel = std::abs(cayley_menger(SquaredDistances4::from_points(p)) - expect) / expect;
    t.observe(rel);
    t.check(rel <= 1e-9);
  }
  const double reg = cayley_menger(SquaredDistances4(1, 1, 1, 1, 1, 1));
  t.check(std::abs(reg - 4.0) <= 1e-12);
  return {2, "cm-volume", t.checks, t.failures, "max rel error " + fmt(t.worst) + ", regular tetrahedron D = " + fmt(reg) + ", " +
              std::to_string(rejected) + " near-flat samples skipped"};
}

SuiteResult sign_table(Rng& rng) {
  Tally t;
  std::size_t bad_pentagons = 0;
  for (int i = 0; i < 1000; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const auto c = cm_constraints(diagonals(random_convex_pentagon(rng, l).configuration), l);
    bool ok = true;
    for (int r = 0; r < 5; ++r)
      for (int col = 0; col < 5; ++col) {
        const double g = c.gradients[r][col];
        const int sign = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
        const bool match = sign == kConstraintSignTable[r][col];
        t.check(match);
        ok = ok && match;
      }
    if (!ok) ++bad_pentagons;
  }
  return {3, "sign-table", t.checks, t.failures,
          "1000 pentagons, " + std::to_string(bad_pentagons) + " with a mismatched entry"};
}

SuiteResult slice_calculus(Rng& rng) {
  Tally t;
  Tally curvature{.lower_is_worse = true};
  for (int i = 0; i < 1000; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const ChargeVector q = random_charges(rng);
    const auto s = random_convex_pentagon(rng, l, 0.01);
    const double x2 = s.b2 * s.b2;
    const double k = s.b4;
    const auto dir = slice_direction(s.configuration);
    t.check(dir[0] < 0.0);  // b1 decreases
    t.check(dir[2] < 0.0);  // b3 decreases
    t.check(dir[4] > 0.0);  // b5 increases

    const Interval r = convex_b2_range(l, k);
    const double h = 1e-3 * std::min(x2 - r.lo * r.lo, r.hi * r.hi - x2);
    auto image = [&](double v) {
      return placement::pentagon_diagonals(placement::pentagon(l.pentagon_sides(), std::sqrt(v), k, 1e-12));
    };
    const auto up = image(x2 + h), down = image(x2 - h);
    t.check(up[0] < down[0]);
    t.check(up[2] < down[2]);
    t.check(up[4] > down[4]);

    const auto d = slice_derivatives(l, q, k, x2);
    curvature.observe(d.second);
    t.check(d.second > 0.0);
    auto e = [&](double v) { return chart_energy(l.pentagon_sides(), q, std::sqrt(v), k, 1e-12); };
    t.check(e(x2 + h) - 2.0 * e(x2) + e(x2 - h) > 0.0);
  }
  return {4, "slice-calculus", t.checks, t.failures, "1000 slice points, min E'' " + fmt(curvature.worst)};
}

SuiteResult uniqueness(Rng& rng) {
  Tally t;
  double spread = 0.0;
  std::size_t merged = 0;
  for (int i = 0; i < 100; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const ChargeVector q = random_charges(rng);
    const auto report = verify_unique_min(l, q, 200);
    t.check(report.local_minima == 1);
    if (report.grid_minima > report.local_minima) ++merged;
    t.check(report.max_component_extrema <= 1);
    const Minimum m = global_min_convex(l, q);
    std::vector<Configuration> found{m.configuration};
    bool converged = true;
    for (int start = 0; start < 20; ++start) {
      const auto seed = random_convex_pentagon(rng, l);
      try {
        found.push_back(descend(l, q, seed.b2, seed.b4).configuration);
      } catch (const Error&) {
        converged = false;
      }
    }
    t.check(converged);
    double worst = 0.0;
    for (std::size_t a = 0; a < found.size(); ++a)
      for (std::size_t b = a + 1; b < found.size(); ++b) worst = std::max(worst, vertex_distance(found[a], found[b]));
    spread = std::max(spread, worst);
    t.check(worst <= 1e-6);
  }
  return {5, "uniqueness", t.checks, t.failures,
          "100 cases on 200x200 grids, " + std::to_string(merged) +
              " with several grid minima descending to one point, max multi-start spread " + fmt(spread)};
}

SuiteResult equilateral(Rng&) {
  Tally t;
  const Minimum m = global_min_convex(Linkage::equilateral(5), ChargeVector({1, 1, 1, 1, 1}));
  const double dist = vertex_distance(m.configuration, regular_pentagon());
  const double de = std::abs(m.E - 5.0 / kPhi);
  t.check(dist <= 1e-8);
  t.check(de <= 1e-9);
  return {6, "equilateral", t.checks, t.failures, "vertex error " + fmt(dist) + ", |E - 5/phi| " + fmt(de)};
}

SuiteResult stabilizer(Rng& rng) {
  Tally t;
  double worst_residual = 0.0, worst_trip = 0.0;
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    const double q1 = u(rng), q2 = u(rng), q4 = u(rng);
    try {
      const auto c = stabilizer_coefficients(p, q1, q2, q4);
      t.check(c.A * c.C < 0.0);
      const auto sol = stabilize_pentagon(p, q1, q2, q4);
      t.check(sol.s > 0.0 && sol.t > 0.0);
      worst_residual = std::max(worst_residual, sol.residual);
      t.check(sol.residual <= 1e-8);
      const double trip = vertex_distance(global_min_convex(l, sol.charges).configuration, p);
      worst_trip = std::max(worst_trip, trip);
      t.check(trip <= 1e-6);
    } catch (const Error&) {
      t.check(false);
    }
  }
  const auto reg = stabilize_pentagon(regular_pentagon(), 1, 1, 1);
  t.check(std::abs(reg.s - 1.0) <= 1e-9 && std::abs(reg.t - 1.0) <= 1e-9);
  return {7, "stabilizer", t.checks, t.failures,
          "max residual " + fmt(worst_residual) + ", max round-trip error " + fmt(worst_trip)};
}

SuiteResult quadrilateral(Rng& rng) {
  Tally t;
  double worst = 0.0;
  int done = 0;
  while (done < 1000) {
    const Linkage l = random_linkage(rng, 4);
    if (quad_convex_range(l).empty()) continue;
    ++done;
    const Configuration p = random_convex_quad(rng, l);
    try {
      const auto s = stabilize_quad(l, p);
      t.check(s.t > 0.0);
      worst = std::max(worst, s.residual);
      t.check(s.residual <= 1e-8);
      // dE/dd13 is affine in t with nonzero slope, so t is unique.
      const QuadRankForm f = quad_rank_form(p);
      t.check(f.a * f.b < 0.0);
    } catch (const Error&) {
      t.check(false);
    }
  }
  const Configuration sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const double anchor = stabilize_quad(Linkage::equilateral(4), sq).t;
  t.check(std::abs(anchor - 1.0) <= 1e-9);
  return {8, "quadrilateral", t.checks, t.failures, "max residual " + fmt(worst) + ", square t = " + fmt(anchor)};
}

SuiteResult mixed_sign(Rng& rng) {
  Tally t{.lower_is_worse = true};
  t.worst = INFINITY;
  std::uniform_real_distribution<double> mag(0.1, 10.0), fixed(0.3, 3.0);
  std::bernoulli_distribution flip(0.5);
  for (int i = 0; i < 1000; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const auto p = random_convex_pentagon(rng, l).configuration;
    double s = mag(rng), tt = mag(rng);
    (flip(rng) ? s : tt) *= -1.0;
    const double r = stationarity_residual(p, pentagon_charges(fixed(rng), fixed(rng), fixed(rng), s, tt));
    t.worst = std::min(t.worst, r);
    t.check(r > 1e-6);
  }
  return {9, "mixed-sign", t.checks, t.failures, "min residual " + fmt(t.worst)};
}

SuiteResult navigation(Rng& rng) {
  Tally t;
  double worst_end = 0.0, worst_refine = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const auto a = random_convex_pentagon(rng, l).configuration;
    const auto b = random_convex_pentagon(rng, l).configuration;
    try {
      const auto t100 = navigate(l, a, b, {}, 100);
      worst_end = std::max(worst_end, t100.endpoint_error);
      t.check(t100.endpoint_error <= 1e-5);
      t.check(std::all_of(t100.steps.begin(), t100.steps.end(),
                          [](const TrajectoryStep& s) { return is_strictly_convex(s.configuration); }));
      const auto t200 = navigate(l, a, b, {}, 200);
      const double refine = vertex_distance(t100.steps.back().configuration, t200.steps.back().configuration);
      worst_refine = std::max(worst_refine, refine);
      t.check(refine <= 1e-7);
    } catch (const Error&) {
      t.check(false);
    }
  }
  const auto id = navigate(Linkage::equilateral(5), regular_pentagon(), regular_pentagon(), {}, 100);
  t.check(id.steps.size() == 1 && vertex_distance(canonicalize(regular_pentagon().vertices), id.steps[0].configuration) == 0.0);
  return {10, "navigation", t.checks, t.failures,
          "50 pairs, max endpoint error " + fmt(worst_end) + ", max refinement change " + fmt(worst_refine)};
}

SuiteResult boundary(Rng& rng) {
  Tally t;
  double lowest = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const Linkage l = random_linkage(rng, 5);
    const ChargeVector q = random_charges(rng);
    const auto r = boundary_criticality_scan(l, q, 500);
    lowest = std::min(lowest, r.min_tangential_gradient);
    t.check(r.samples == 500);
    t.check(r.min_tangential_gradient > 1e-6);
  }
  return {11, "boundary", t.checks, t.failures, "20 cases x 500 samples, min tangential gradient " + fmt(lowest)};
}

using Suite = std::function<SuiteResult(Rng&)>;

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> all{
      {"cm-derivative", cm_derivative}, {"cm-volume", cm_volume},   {"sign-table", sign_table},
      {"slice-calculus", slice_calculus}, {"uniqueness", uniqueness}, {"equilateral", equilateral},
      {"stabilizer", stabilizer},       {"quadrilateral", quadrilateral}, {"mixed-sign", mixed_sign},
      {"navigation", navigation},       {"boundary", boundary},
  };
  return all;
}

}  // namespace

std::string SuiteResult::line() const {
  return "criterion " + std::to_string(criterion) + " " + name + ": " + (passed() ? "PASS" : "FAIL") + " (" +
         std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks; " + detail + ")";
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suites()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  const auto& all = suites();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].first == name) {
      Rng rng(seed + 1000003ULL * (i + 1));
      try {
        return all[i].second(rng);
      } catch (const std::exception& e) {
        return {static_cast<int>(i + 1), name, 1, 1, std::string("aborted: ") + e.what()};
      }
    }
  throw std::invalid_argument("unknown suite \"" + name + "\"");
}

}  // namespace linkcharge::verify
