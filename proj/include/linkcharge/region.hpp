#pragma once

#include "linkcharge/moduli.hpp"

namespace linkcharge {

/// The convex region of a pentagonal linkage decomposed into slices b4 = k.
/// Computing the admissible k range costs a scan, so callers that query many
/// slices hold one of these.
class ConvexRegion {
 public:
  explicit ConvexRegion(Linkage linkage);

  const Linkage& linkage() const { return linkage_; }
  const Interval& k_range() const { return k_range_; }

  Interval b2_range(double k) const { return convex_b2_range(linkage_, k); }
  Slice slice(double k) const;

  /// k at fraction u in [0, 1] of the admissible range.
  double k_at(double u) const { return k_range_.lo + u * k_range_.width(); }

 private:
  Linkage linkage_;
  Interval k_range_;
};

}  // namespace linkcharge
