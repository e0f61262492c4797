#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "fixpave/interval.hpp"

namespace fixpave {

using Point = Eigen::VectorXd;

/// Product of n >= 1 closed intervals, measured in the Chebyshev metric.
class Box {
 public:
  /// Throws InvalidInterval when dims is empty.
  explicit Box(std::vector<Interval> dims);
  Box(std::initializer_list<Interval> dims);

  /// The degenerate box {p}.
  static Box from_point(const Point& p);

  std::size_t size() const noexcept { return dims_.size(); }
  const Interval& operator[](std::size_t i) const { return dims_[i]; }
  auto begin() const noexcept { return dims_.begin(); }
  auto end() const noexcept { return dims_.end(); }
  const std::vector<Interval>& dims() const noexcept { return dims_; }

  /// max_i width of component i (upward rounded).
  double diameter() const noexcept;
  /// Index of the widest component, lowest index on ties.
  std::size_t widest() const noexcept;

  Point lower() const;
  Point upper() const;
  Point midpoint() const;

  bool contains(const Point& p) const;
  bool contains(const Box& other) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> dims_;
};

/// Componentwise intersection; nullopt when some component is empty.
/// Throws DimensionMismatch.
std::optional<Box> intersect(const Box& a, const Box& b);
bool overlaps(const Box& a, const Box& b);
Box hull(const Box& a, const Box& b);

/// Split at the midpoint of the widest component. Throws DegenerateBox when
/// the diameter is 0.
std::pair<Box, Box> bisect(const Box& b);

/// Cartesian product a x b.
Box concat(const Box& a, const Box& b);
/// Components of b selected by the given indices.
Box select(const Box& b, const std::vector<std::size_t>& indices);

/// Chebyshev distance between points.
double chebyshev_distance(const Point& a, const Point& b);
/// Chebyshev distance from p to the nearest point of b (0 when inside).
double chebyshev_distance(const Point& p, const Box& b);

/// The 2^n corners of b in binary counting order over components.
std::vector<Point> corners(const Box& b);

std::ostream& operator<<(std::ostream& os, const Box& b);

}  // namespace fixpave
