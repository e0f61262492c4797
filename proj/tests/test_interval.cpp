#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fixpave/box.hpp"
#include "fixpave/errors.hpp"
#include "fixpave/interval.hpp"
#include "fixpave/json_io.hpp"

using namespace fixpave;

namespace {

Interval random_interval(std::mt19937_64& rng, double scale = 4.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  double a = d(rng), b = d(rng);
  if (a > b) std::swap(a, b);
  return {a, b};
}

double sample(std::mt19937_64& rng, const Interval& x) {
  return std::uniform_real_distribution<double>(x.lo(), x.hi())(rng);
}

// Nested interval inside x.
Interval shrink(std::mt19937_64& rng, const Interval& x) {
  double a = sample(rng, x), b = sample(rng, x);
  if (a > b) std::swap(a, b);
  return {a, b};
}

struct BinaryCase {
  const char* name;
  std::function<Interval(const Interval&, const Interval&)> interval;
  std::function<double(double, double)> point;
};

const std::vector<BinaryCase>& binary_cases() {
  static const std::vector<BinaryCase> cases = {
      {"add", [](auto& a, auto& b) { return a + b; }, [](double x, double y) { return x + y; }},
      {"sub", [](auto& a, auto& b) { return a - b; }, [](double x, double y) { return x - y; }},
      {"mul", [](auto& a, auto& b) { return a * b; }, [](double x, double y) { return x * y; }},
      {"min", [](auto& a, auto& b) { return min(a, b); }, [](double x, double y) { return std::min(x, y); }},
      {"max", [](auto& a, auto& b) { return max(a, b); }, [](double x, double y) { return std::max(x, y); }},
  };
  return cases;
}

struct UnaryCase {
  const char* name;
  std::function<Interval(const Interval&)> interval;
  std::function<double(double)> point;
};

const std::vector<UnaryCase>& unary_cases() {
  static const std::vector<UnaryCase> cases = {
      {"neg", [](auto& a) { return -a; }, [](double x) { return -x; }},
      {"abs", [](auto& a) { return abs(a); }, [](double x) { return std::abs(x); }},
      {"sin", [](auto& a) { return sin(a); }, [](double x) { return std::sin(x); }},
      {"cos", [](auto& a) { return cos(a); }, [](double x) { return std::cos(x); }},
      {"exp", [](auto& a) { return exp(a); }, [](double x) { return std::exp(x); }},
      {"pow2", [](auto& a) { return pow(a, 2); }, [](double x) { return x * x; }},
      {"pow3", [](auto& a) { return pow(a, 3); }, [](double x) { return x * x * x; }},
      {"pow4", [](auto& a) { return pow(a, 4); }, [](double x) { return (x * x) * (x * x); }},
  };
  return cases;
}

}  // namespace

TEST(Interval, RejectsBadEndpoints) {
  EXPECT_THROW(Interval(2.0, 1.0), InvalidInterval);
  EXPECT_THROW(Interval(0.0, INFINITY), InvalidInterval);
  EXPECT_THROW(Interval(NAN, 1.0), InvalidInterval);
  EXPECT_NO_THROW(Interval(1.0, 1.0));
}

TEST(Interval, ExactSumsStayTight) {
  EXPECT_EQ(Interval(1, 2) + Interval(3, 4), Interval(4, 6));
}

TEST(Interval, ProductCaseAnalysis) {
  EXPECT_EQ(Interval(-1, 2) * Interval(3, 4), Interval(-4, 8));
}

TEST(Interval, InexactSumRoundsOutward) {
  const Interval r = Interval(0.1) + Interval(0.2);
  EXPECT_LT(r.lo(), r.hi());
  // 0.1 + 0.2 in exact binary lies strictly between the two.
  EXPECT_EQ(std::nextafter(r.lo(), 1.0), r.hi());
}

TEST(Interval, DivisionByZeroInterval) {
  EXPECT_THROW(Interval(1, 2) / Interval(-1, 1), DivisionByZeroInterval);
  EXPECT_THROW(Interval(1, 2) / Interval(0, 1), DivisionByZeroInterval);
  const Interval q = Interval(1, 2) / Interval(4, 8);
  EXPECT_EQ(q, Interval(0.125, 0.5));
}

TEST(Interval, SineRangeAgainstSampling) {
  const Interval x(0.0, 3.2);
  const Interval s = sin(x);
  EXPECT_TRUE(s.contains(Interval(0.0, 1.0)));
  double lo = 1.0, hi = -1.0;
  for (int k = 0; k <= 100000; ++k) {
    const double v = std::sin(3.2 * k / 100000.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LE(s.lo(), lo);
  EXPECT_GE(s.hi(), hi);
  EXPECT_LT(s.lo(), -0.05);
  EXPECT_GT(s.lo(), -0.06);
}

TEST(Interval, WideTrigIsFullRange) {
  EXPECT_EQ(sin(Interval(0, 7)), Interval(-1, 1));
  EXPECT_EQ(cos(Interval(-100, 100)), Interval(-1, 1));
}

TEST(Interval, EvenPowerOfStraddlingInterval) {
  EXPECT_EQ(pow(Interval(-2, 1), 2), Interval(0, 4));
  EXPECT_EQ(pow(Interval(-2, 1), 3), Interval(-8, 1));
  EXPECT_EQ(pow(Interval(-3, -2), 2), Interval(4, 9));
  EXPECT_EQ(pow(Interval(-3, 2), 0), Interval(1));
}

TEST(Interval, OverflowIsReported) {
  EXPECT_THROW(exp(Interval(0, 1000)), NonFiniteInterval);
  EXPECT_THROW(Interval(1e308, 1e308) * Interval(10, 10), NonFiniteInterval);
}

TEST(IntervalProperty, BinarySoundness) {
  std::mt19937_64 rng(7);
  for (const auto& c : binary_cases()) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Interval a = random_interval(rng), b = random_interval(rng);
      const Interval r = c.interval(a, b);
      for (int k = 0; k < 8; ++k) {
        const double x = sample(rng, a), y = sample(rng, b);
        ASSERT_TRUE(r.contains(c.point(x, y))) << c.name << " " << a << " " << b << " at " << x << ", " << y;
      }
      ASSERT_TRUE(r.contains(c.point(a.lo(), b.hi())));
      ASSERT_TRUE(r.contains(c.point(a.hi(), b.lo())));
    }
  }
}

TEST(IntervalProperty, DivisionSoundness) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Interval a = random_interval(rng);
    Interval b = random_interval(rng);
    if (b.contains(0.0)) b = Interval(b.hi() + 0.5, b.hi() + 1.0);
    const Interval r = a / b;
    for (int k = 0; k < 8; ++k) {
      const double x = sample(rng, a), y = sample(rng, b);
      ASSERT_TRUE(r.contains(x / y));
    }
  }
}

TEST(IntervalProperty, UnarySoundness) {
  std::mt19937_64 rng(13);
  for (const auto& c : unary_cases()) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Interval a = random_interval(rng, 8.0);
      const Interval r = c.interval(a);
      for (int k = 0; k < 8; ++k) {
        const double x = sample(rng, a);
        ASSERT_TRUE(r.contains(c.point(x))) << c.name << " " << a << " at " << x;
      }
      ASSERT_TRUE(r.contains(c.point(a.lo())) && r.contains(c.point(a.hi()))) << c.name << " " << a;
    }
  }
}

TEST(IntervalProperty, InclusionMonotonicity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const Interval a = random_interval(rng), b = random_interval(rng);
    const Interval a2 = shrink(rng, a), b2 = shrink(rng, b);
    for (const auto& c : binary_cases()) {
      ASSERT_TRUE(c.interval(a, b).contains(c.interval(a2, b2))) << c.name;
    }
    for (const auto& c : unary_cases()) {
      ASSERT_TRUE(c.interval(a).contains(c.interval(a2))) << c.name;
    }
  }
}

TEST(Rounding, DecimalLiteralsAreBracketed) {
  const double lo = rounding::decimal_down("0.1");
  const double hi = rounding::decimal_up("0.1");
  EXPECT_LT(lo, hi);
  EXPECT_EQ(std::nextafter(lo, 1.0), hi);
  EXPECT_TRUE(lo == 0.1 || hi == 0.1);
  EXPECT_EQ(rounding::decimal_down("0.5"), 0.5);
  EXPECT_EQ(rounding::decimal_up("0.5"), 0.5);
  EXPECT_THROW(rounding::decimal_down("abc"), InvalidInterval);
}

TEST(Rounding, DirectedOpsBracketExactResult) {
  // 1/3: down and up differ by one ulp and 3*down < 1 < 3*up in exact arithmetic.
  const double d = rounding::div_down(1.0, 3.0), u = rounding::div_up(1.0, 3.0);
  EXPECT_EQ(std::nextafter(d, 1.0), u);
  EXPECT_LT(std::fma(3.0, d, -1.0), 0.0);
  EXPECT_GT(std::fma(3.0, u, -1.0), 0.0);
}

TEST(Box, IntersectExamples) {
  EXPECT_EQ(*intersect(Box{{0, 1}}, Box{{0.5, 2}}), (Box{{0.5, 1}}));
  EXPECT_FALSE(intersect(Box{{0, 1}}, Box{{2, 3}}).has_value());
  EXPECT_EQ(*intersect(Box{{0, 1}, {0, 1}}, Box{{0.5, 2}, {-1, 0.25}}), (Box{{0.5, 1}, {0, 0.25}}));
  EXPECT_THROW(intersect(Box{{0, 1}}, Box{{0, 1}, {0, 1}}), DimensionMismatch);
}

TEST(Box, BisectExamples) {
  auto [l1, r1] = bisect(Box{{0, 1}});
  EXPECT_EQ(l1, (Box{{0, 0.5}}));
  EXPECT_EQ(r1, (Box{{0.5, 1}}));

  auto [l2, r2] = bisect(Box{{0, 2}, {0, 1}});
  EXPECT_EQ(l2, (Box{{0, 1}, {0, 1}}));
  EXPECT_EQ(r2, (Box{{1, 2}, {0, 1}}));

  auto [l3, r3] = bisect(Box{{0, 1}, {0, 1}});
  EXPECT_EQ(l3, (Box{{0, 0.5}, {0, 1}}));
  EXPECT_EQ(r3, (Box{{0.5, 1}, {0, 1}}));

  EXPECT_THROW(bisect(Box{{1, 1}, {2, 2}}), DegenerateBox);
}

TEST(BoxProperty, BisectHalvesCoverExactly) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Interval> dims;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) dims.push_back(random_interval(rng));
    const Box b(dims);
    const auto [l, r] = bisect(b);
    const std::size_t k = b.widest();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i == k) {
        ASSERT_EQ(l[i].lo(), b[i].lo());
        ASSERT_EQ(l[i].hi(), r[i].lo());
        ASSERT_EQ(r[i].hi(), b[i].hi());
      } else {
        ASSERT_EQ(l[i], b[i]);
        ASSERT_EQ(r[i], b[i]);
      }
    }
    ASSERT_EQ(hull(l, r), b);
  }
}

TEST(Box, DiameterAndDistances) {
  const Box b{{0, 2}, {1, 1.5}};
  EXPECT_EQ(b.diameter(), 2.0);
  EXPECT_EQ(b.widest(), 0u);
  Point p(2);
  p << 3.0, 1.0;
  EXPECT_EQ(chebyshev_distance(p, b), 1.0);
  EXPECT_EQ(corners(b).size(), 4u);
  EXPECT_EQ(select(b, {1}), (Box{{1, 1.5}}));
  EXPECT_EQ(concat(Box{{0, 1}}, Box{{2, 3}}), (Box{{0, 1}, {2, 3}}));
}

TEST(BoxJson, ReadsOutwardAndRoundTrips) {
  const Box b = box_from_json_text("[[0.1, 0.3], [-1, 2.5]]");
  EXPECT_LE(b[0].lo(), 0.1);
  EXPECT_GE(b[0].hi(), 0.3);
  EXPECT_EQ(b[1], Interval(-1, 2.5));
  EXPECT_EQ(box_from_json(to_json(b)), b);
}

TEST(BoxJson, SchemaErrorsNamePath) {
  try {
    box_from_json_text("[[0, 1], [2, 1]]");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "/1");
  }
  EXPECT_THROW(box_from_json_text("[]"), SchemaError);
  EXPECT_THROW(box_from_json_text("[[0, 1, 2]]"), SchemaError);
  EXPECT_THROW(box_from_json_text("[[0, 1]"), JsonSyntaxError);
}
