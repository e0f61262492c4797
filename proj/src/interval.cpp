#include "fixpave/interval.hpp"

#include <algorithm>
#include <cerrno>
#include <cfenv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace rounding {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this magnitude an FMA residual may itself be rounded, so exactness
// cannot be decided and the result is stepped unconditionally.
constexpr double kTiny = 0x1p-960;

// exact = approx + err; move approx toward the sign of err.
double lower_of(double approx, double err) noexcept {
  return err < 0.0 ? next_down(approx) : approx;
}
double upper_of(double approx, double err) noexcept {
  return err > 0.0 ? next_up(approx) : approx;
}

double two_sum_err(double a, double b, double s) noexcept {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

// Sign of (exact product - p); returns NaN when it cannot be decided.
double product_err(double a, double b, double p) noexcept {
  if (a == 0.0 || b == 0.0) return 0.0;
  if (std::abs(p) < kTiny) return std::numeric_limits<double>::quiet_NaN();
  return std::fma(a, b, -p);
}

// Sign of (exact quotient - q).
double quotient_err(double a, double b, double q) noexcept {
  if (a == 0.0) return 0.0;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return std::numeric_limits<double>::quiet_NaN();
  const double r = std::fma(-q, b, a);  // a - q*b, exact
  if (r == 0.0) return 0.0;
  return (r > 0.0) == (b > 0.0) ? 1.0 : -1.0;
}

double decimal_directed(const char* text, int mode) {
  const int saved = std::fegetround();
  std::fesetround(mode);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text, &end);
  const int err = errno;
  std::fesetround(saved);
  if (end == text || *end != '\0') {
    throw InvalidInterval(std::string("malformed decimal literal '") + text + "'");
  }
  if (err == ERANGE && std::isinf(value)) {
    throw InvalidInterval(std::string("decimal literal out of range '") + text + "'");
  }
  return value;
}

}  // namespace

double next_down(double x) noexcept { return std::nextafter(x, -kInf); }
double next_up(double x) noexcept { return std::nextafter(x, kInf); }

double add_down(double a, double b) noexcept {
  const double s = a + b;
  return lower_of(s, two_sum_err(a, b, s));
}
double add_up(double a, double b) noexcept {
  const double s = a + b;
  return upper_of(s, two_sum_err(a, b, s));
}
double sub_down(double a, double b) noexcept { return add_down(a, -b); }
double sub_up(double a, double b) noexcept { return add_up(a, -b); }

double mul_down(double a, double b) noexcept {
  const double p = a * b;
  const double e = product_err(a, b, p);
  return std::isnan(e) ? next_down(p) : lower_of(p, e);
}
double mul_up(double a, double b) noexcept {
  const double p = a * b;
  const double e = product_err(a, b, p);
  return std::isnan(e) ? next_up(p) : upper_of(p, e);
}

double div_down(double a, double b) noexcept {
  const double q = a / b;
  const double e = quotient_err(a, b, q);
  return std::isnan(e) ? next_down(q) : lower_of(q, e);
}
double div_up(double a, double b) noexcept {
  const double q = a / b;
  const double e = quotient_err(a, b, q);
  return std::isnan(e) ? next_up(q) : upper_of(q, e);
}

double decimal_down(const char* text) { return decimal_directed(text, FE_DOWNWARD); }
double decimal_up(const char* text) { return decimal_directed(text, FE_UPWARD); }

}  // namespace rounding

using namespace rounding;

namespace {

Interval checked(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonFiniteInterval();
  return Interval(lo, hi);
}

// x^n for x >= 0 with directed rounding.
double pow_down(double x, unsigned n) noexcept {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r = mul_down(r, x);
  return std::max(r, 0.0);
}
double pow_up(double x, unsigned n) noexcept {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r = mul_up(r, x);
  return r;
}

// Range of sin or cos. Extremes sit at offset + k*pi: +1 for even k, -1 for
// odd k. A critical point is included whenever it might lie in [lo, hi].
Interval periodic_range(const Interval& a, double offset, double (*f)(double)) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a.hi() - a.lo() >= kTwoPi || std::abs(a.lo()) > 1e15 || std::abs(a.hi()) > 1e15) {
    return Interval(-1.0, 1.0);
  }
  const double t_lo = (a.lo() - offset) / std::numbers::pi;
  const double t_hi = (a.hi() - offset) / std::numbers::pi;
  const double slack = 1e-12 * (1.0 + std::max(std::abs(t_lo), std::abs(t_hi)));
  const auto k_from = static_cast<long long>(std::ceil(t_lo - slack));
  const auto k_to = static_cast<long long>(std::floor(t_hi + slack));

  const double f_lo = f(a.lo());
  const double f_hi = f(a.hi());
  double lo = next_down(std::min(f_lo, f_hi));
  double hi = next_up(std::max(f_lo, f_hi));
  for (long long k = k_from; k <= k_to; ++k) {
    if (k % 2 == 0) {
      hi = 1.0;
    } else {
      lo = -1.0;
    }
  }
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInterval("interval endpoints must be finite");
  }
  if (lo > hi) {
    throw InvalidInterval("interval lower endpoint exceeds upper endpoint");
  }
}

Interval::Interval(double x) : Interval(x, x) {}

double Interval::width() const noexcept { return sub_up(hi_, lo_); }

double Interval::mid() const noexcept {
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

Interval operator+(const Interval& a, const Interval& b) {
  return checked(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return checked(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo()));
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator*(const Interval& a, const Interval& b) {
  const double ends[2][2] = {{a.lo(), a.hi()}, {b.lo(), b.hi()}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : ends[0]) {
    for (double y : ends[1]) {
      lo = std::min(lo, mul_down(x, y));
      hi = std::max(hi, mul_up(x, y));
    }
  }
  return checked(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains(0.0)) throw DivisionByZeroInterval();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : {a.lo(), a.hi()}) {
    for (double y : {b.lo(), b.hi()}) {
      lo = std::min(lo, div_down(x, y));
      hi = std::max(hi, div_up(x, y));
    }
  }
  return checked(lo, hi);
}

Interval pow(const Interval& a, unsigned n) {
  if (n == 0) return Interval(1.0);
  if (n % 2 == 1) {
    const double lo = a.lo() >= 0.0 ? pow_down(a.lo(), n) : -pow_up(-a.lo(), n);
    const double hi = a.hi() >= 0.0 ? pow_up(a.hi(), n) : -pow_down(-a.hi(), n);
    return checked(lo, hi);
  }
  if (a.lo() >= 0.0) return checked(pow_down(a.lo(), n), pow_up(a.hi(), n));
  if (a.hi() <= 0.0) return checked(pow_down(-a.hi(), n), pow_up(-a.lo(), n));
  return checked(0.0, pow_up(std::max(-a.lo(), a.hi()), n));
}

Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return -a;
  return Interval(0.0, std::max(-a.lo(), a.hi()));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval sin(const Interval& a) {
  return periodic_range(a, 0.5 * std::numbers::pi, [](double x) { return std::sin(x); });
}

Interval cos(const Interval& a) {
  return periodic_range(a, 0.0, [](double x) { return std::cos(x); });
}

Interval exp(const Interval& a) {
  const double lo = std::max(next_down(std::exp(a.lo())), 0.0);
  const double hi = next_up(std::exp(a.hi()));
  return checked(lo, hi);
}

bool overlaps(const Interval& a, const Interval& b) noexcept {
  return a.lo() <= b.hi() && b.lo() <= a.hi();
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  if (!overlaps(a, b)) return std::nullopt;
  return Interval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

}  // namespace fixpave
