#include "fixpave/box.hpp"

#include <algorithm>
#include <ostream>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace {

void require_same_size(const Box& a, const Box& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
}

}  // namespace

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidInterval("a box needs at least one component");
}

Box::Box(std::initializer_list<Interval> dims) : Box(std::vector<Interval>(dims)) {}

Box Box::from_point(const Point& p) {
  std::vector<Interval> dims;
  dims.reserve(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) dims.emplace_back(p[i]);
  return Box(std::move(dims));
}

double Box::diameter() const noexcept {
  double d = 0.0;
  for (const auto& x : dims_) d = std::max(d, x.width());
  return d;
}

std::size_t Box::widest() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dims_.size(); ++i) {
    if (dims_[i].width() > dims_[best].width()) best = i;
  }
  return best;
}

Point Box::lower() const {
  Point p(static_cast<Eigen::Index>(dims_.size()));
  for (std::size_t i = 0; i < dims_.size(); ++i) p[static_cast<Eigen::Index>(i)] = dims_[i].lo();
  return p;
}

Point Box::upper() const {
  Point p(static_cast<Eigen::Index>(dims_.size()));
  for (std::size_t i = 0; i < dims_.size(); ++i) p[static_cast<Eigen::Index>(i)] = dims_[i].hi();
  return p;
}

Point Box::midpoint() const {
  Point p(static_cast<Eigen::Index>(dims_.size()));
  for (std::size_t i = 0; i < dims_.size(); ++i) p[static_cast<Eigen::Index>(i)] = dims_[i].mid();
  return p;
}

bool Box::contains(const Point& p) const {
  if (static_cast<std::size_t>(p.size()) != dims_.size()) {
    throw DimensionMismatch(dims_.size(), static_cast<std::size_t>(p.size()));
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!dims_[i].contains(p[static_cast<Eigen::Index>(i)])) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!dims_[i].contains(other[i])) return false;
  }
  return true;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  require_same_size(a, b);
  std::vector<Interval> dims;
  dims.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = intersect(a[i], b[i]);
    if (!x) return std::nullopt;
    dims.push_back(*x);
  }
  return Box(std::move(dims));
}

bool overlaps(const Box& a, const Box& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!overlaps(a[i], b[i])) return false;
  }
  return true;
}

Box hull(const Box& a, const Box& b) {
  require_same_size(a, b);
  std::vector<Interval> dims;
  dims.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) dims.push_back(hull(a[i], b[i]));
  return Box(std::move(dims));
}

std::pair<Box, Box> bisect(const Box& b) {
  if (b.diameter() == 0.0) throw DegenerateBox();
  const std::size_t k = b.widest();
  const double m = b[k].mid();
  std::vector<Interval> left = b.dims();
  std::vector<Interval> right = b.dims();
  left[k] = Interval(b[k].lo(), m);
  right[k] = Interval(m, b[k].hi());
  return {Box(std::move(left)), Box(std::move(right))};
}

Box concat(const Box& a, const Box& b) {
  std::vector<Interval> dims = a.dims();
  dims.insert(dims.end(), b.begin(), b.end());
  return Box(std::move(dims));
}

Box select(const Box& b, const std::vector<std::size_t>& indices) {
  std::vector<Interval> dims;
  dims.reserve(indices.size());
  for (std::size_t i : indices) dims.push_back(b.dims().at(i));
  return Box(std::move(dims));
}

double chebyshev_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()));
  }
  return (a - b).lpNorm<Eigen::Infinity>();
}

double chebyshev_distance(const Point& p, const Box& b) {
  if (static_cast<std::size_t>(p.size()) != b.size()) {
    throw DimensionMismatch(b.size(), static_cast<std::size_t>(p.size()));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double x = p[static_cast<Eigen::Index>(i)];
    d = std::max({d, b[i].lo() - x, x - b[i].hi()});
  }
  return d;
}

std::vector<Point> corners(const Box& b) {
  const std::size_t n = b.size();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Point p(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      p[static_cast<Eigen::Index>(i)] = (mask >> i) & 1U ? b[i].hi() : b[i].lo();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Box& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i > 0) os << " x ";
    os << b[i];
  }
  return os;
}

}  // namespace fixpave
