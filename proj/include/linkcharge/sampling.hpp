#pragma once

#include <random>

#include "linkcharge/moduli.hpp"

namespace linkcharge {

using Rng = std::mt19937_64;

/// Generic random linkage with sides drawn from [0.3, 1] and rescaled so the
/// longest side is 1.
Linkage random_linkage(Rng& rng, std::size_t n);

struct PentagonSample {
  Configuration configuration;
  double b2 = 0.0;
  double b4 = 0.0;
};

/// Strictly convex configuration drawn from the slice chart: k uniform over
/// the admissible range, then b2 uniform over the slice, both shrunk by
/// `margin` (a fraction of the range) at either end.
PentagonSample random_convex_pentagon(Rng& rng, const Linkage& l, double margin = 0.0);

/// Strictly convex quadrilateral with d13 uniform over the convex range.
Configuration random_convex_quad(Rng& rng, const Linkage& l, double margin = 0.0);

}  // namespace linkcharge
