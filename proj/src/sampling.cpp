#include "linkcharge/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "linkcharge/error.hpp"
#include "linkcharge/region.hpp"

namespace linkcharge {

Linkage random_linkage(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.3, 1.0);
  for (;;) {
    std::vector<double> s(n);
    for (double& v : s) v = u(rng);
    const double m = *std::max_element(s.begin(), s.end());
    for (double& v : s) v /= m;
    if (std::accumulate(s.begin(), s.end(), 0.0) <= 2.0) continue;
    Linkage l(std::move(s));
    if (!is_nongeneric(l)) return l;
  }
}

PentagonSample random_convex_pentagon(Rng& rng, const Linkage& l, double margin) {
  const ConvexRegion region(l);
  std::uniform_real_distribution<double> u(margin, 1.0 - margin);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double k = region.k_at(u(rng));
    const Interval r = region.b2_range(k);
    if (r.empty() || r.width() <= 0.0) continue;
    const double b2 = r.lo + u(rng) * r.width();
    try {
      Reconstruction rec = reconstruct_pentagon(l, b2, k);
      if (rec.status == ShapeStatus::StrictlyConvex) return {std::move(rec.configuration), b2, k};
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::EmptyModuli, "could not sample a strictly convex pentagon");
}

Configuration random_convex_quad(Rng& rng, const Linkage& l, double margin) {
  const Interval r = quad_convex_range(l);
  if (r.empty()) throw Error(ErrorCode::EmptyModuli, "four-bar linkage has no convex configurations");
  std::uniform_real_distribution<double> u(margin, 1.0 - margin);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      Reconstruction rec = reconstruct_quad(l, r.lo + u(rng) * r.width());
      if (rec.status == ShapeStatus::StrictlyConvex) return std::move(rec.configuration);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::EmptyModuli, "could not sample a strictly convex quadrilateral");
}

}  // namespace linkcharge
