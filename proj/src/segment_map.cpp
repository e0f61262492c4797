#include "fixpave/segment_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace {

// Enclosure of the midpoint (a + b) / 2.
Interval midpoint_of(const Segment& s) { return (Interval(s.a) + Interval(s.b)) / Interval(2.0); }

}  // namespace

SegmentMap::SegmentMap(std::vector<Segment> segments, double tail_sup)
    : domain_{Interval(0.0, 1.0)}, segments_(std::move(segments)), tail_sup_(tail_sup) {
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(0.0 <= s.a && s.a < s.b && s.b <= 1.0)) {
      throw InvalidSegments("segment " + std::to_string(i) + " must satisfy 0 <= a < b <= 1");
    }
    if (i > 0 && !(segments_[i - 1].b < s.a)) {
      throw InvalidSegments("segments overlap near " + std::to_string(s.a));
    }
  }
  if (!(tail_sup_ >= 0.0) || (!segments_.empty() && !(tail_sup_ < segments_.front().a))) {
    throw InvalidSegments("tail region must lie strictly below every segment");
  }
}

SegmentMap SegmentMap::harmonic(std::size_t count) {
  std::vector<Segment> segs;
  segs.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double n = static_cast<double>(i);
    segs.push_back({1.0 / (2.0 * n + 1.0), 1.0 / (2.0 * n)});
  }
  const double tail = rounding::div_up(1.0, 2.0 * static_cast<double>(count) + 2.0);
  return SegmentMap(std::move(segs), tail);
}

std::vector<Box> SegmentMap::image(const Box& y) const {
  if (y.size() != 1) throw DimensionMismatch(1, y.size());
  const Interval& q = y[0];
  std::vector<Box> out;

  // Segments with b >= q.lo and a <= q.hi.
  const auto first = std::lower_bound(segments_.begin(), segments_.end(), q.lo(),
                                      [](const Segment& s, double v) { return s.b < v; });
  const auto last = std::upper_bound(first, segments_.end(), q.hi(),
                                     [](double v, const Segment& s) { return v < s.a; });
  const auto count = static_cast<std::size_t>(last - first);
  if (count > kMaxListed) {
    out.push_back(Box{Interval(first->a, (last - 1)->b)});
  } else {
    for (auto it = first; it != last; ++it) {
      const double lo = std::max(it->a, q.lo());
      const double hi = std::min(it->b, q.hi());
      const Interval m = midpoint_of(*it);
      if (lo < m.hi()) out.push_back(Box{Interval(it->b)});  // near half maps to b
      if (hi > m.lo()) out.push_back(Box{Interval(it->a)});  // far half maps to a
    }
  }
  if (tail_sup_ > 0.0 && q.lo() <= tail_sup_) out.push_back(Box{Interval(0.0, tail_sup_)});
  return out;
}

double SegmentMap::residual(const Point& x) const {
  if (x.size() != 1) throw DimensionMismatch(1, static_cast<std::size_t>(x.size()));
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double v = x[0];
  if (tail_sup_ > 0.0 && v == 0.0) return 0.0;
  if (v <= tail_sup_) return kInf;
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), v,
                                   [](const Segment& s, double p) { return s.b < p; });
  if (it == segments_.end() || v < it->a) return kInf;
  const Interval m = midpoint_of(*it);
  const double to_b = rounding::sub_up(it->b, v);
  const double to_a = rounding::sub_up(v, it->a);
  if (v < m.lo()) return to_b;
  if (v > m.hi()) return to_a;
  return std::max(to_a, to_b);
}

}  // namespace fixpave
