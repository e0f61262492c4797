#pragma once

#include <cstddef>
#include <vector>

#include "fixpave/multimap.hpp"

namespace fixpave {

struct Segment {
  double a;
  double b;
};

/// The closure of G(x) = U_i argmax_{y in [a_i, b_i]} |y - x| on [0, 1]: each
/// point of a segment is sent to the segment's far endpoint.
///
/// Segments with infinitely many members accumulating at 0 are represented by
/// a finite list plus a tail region [0, tail_sup] that is assumed to hold the
/// rest of the graph (including the closure point (0, 0)).
class SegmentMap final : public SetValuedMap {
 public:
  /// More segments than this meeting a query box are reported as one hull.
  static constexpr std::size_t kMaxListed = 32;

  /// Throws InvalidSegments unless 0 <= a < b <= 1, the segments are pairwise
  /// disjoint and tail_sup lies strictly below every segment.
  SegmentMap(std::vector<Segment> segments, double tail_sup);

  /// Segments [1/(2i+1), 1/(2i)] for i = 1..count, tail below 1/(2 count + 2).
  static SegmentMap harmonic(std::size_t count = std::size_t{1} << 16);

  const Box& domain() const override { return domain_; }
  std::vector<Box> image(const Box& y) const override;
  double residual(const Point& x) const override;

  /// Segments in increasing order.
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double tail_sup() const noexcept { return tail_sup_; }

 private:
  Box domain_;
  std::vector<Segment> segments_;
  double tail_sup_;
};

}  // namespace fixpave
