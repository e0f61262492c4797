#pragma once

#include <iosfwd>
#include <optional>

namespace fixpave {

/// Closed interval [lo, hi] with finite double endpoints.
///
/// Every arithmetic operation returns an enclosure of the exact real result:
/// an endpoint is moved one representable number outward whenever the
/// rounded floating-point value is not exact. Values are immutable.
class Interval {
 public:
  constexpr Interval() noexcept = default;
  /// Throws InvalidInterval unless lo <= hi and both are finite.
  Interval(double lo, double hi);
  /// Degenerate interval [x, x].
  explicit Interval(double x);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  /// hi - lo rounded upward.
  double width() const noexcept;
  /// A representable point inside the interval, close to the center.
  double mid() const noexcept;
  bool is_point() const noexcept { return lo_ == hi_; }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws DivisionByZeroInterval when 0 is in b.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

/// a^n by even/odd case analysis.
Interval pow(const Interval& a, unsigned n);
Interval abs(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);

bool overlaps(const Interval& a, const Interval& b) noexcept;
std::optional<Interval> intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

std::ostream& operator<<(std::ostream& os, const Interval& x);

namespace rounding {

double next_down(double x) noexcept;
double next_up(double x) noexcept;

// Directed results of a single operation: the largest representable value
// <= the exact result (down) or the smallest >= it (up), up to one ulp.
double add_down(double a, double b) noexcept;
double add_up(double a, double b) noexcept;
double sub_down(double a, double b) noexcept;
double sub_up(double a, double b) noexcept;
double mul_down(double a, double b) noexcept;
double mul_up(double a, double b) noexcept;
double div_down(double a, double b) noexcept;
double div_up(double a, double b) noexcept;

/// Parse a decimal literal rounding toward -inf / +inf. Throws InvalidInterval
/// on malformed text.
double decimal_down(const char* text);
double decimal_up(const char* text);

}  // namespace rounding

}  // namespace fixpave
