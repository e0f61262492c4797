#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixpave/errors.hpp"
#include "fixpave/multimap.hpp"
#include "fixpave/segment_map.hpp"

using namespace fixpave;

namespace {

using Matrix = std::vector<std::vector<bool>>;  // m[x][y]: y in F(x)

Matrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  Matrix m(n, std::vector<bool>(n));
  for (auto& row : m) {
    for (std::size_t y = 0; y < n; ++y) row[y] = rng() % 3 == 0;
  }
  return m;
}

FiniteRelation relation_of(const Matrix& m) {
  std::vector<std::string> ground;
  for (std::size_t i = 0; i < m.size(); ++i) ground.push_back("e" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (m[x][y]) pairs.emplace_back(ground[x], ground[y]);
    }
  }
  return FiniteRelation(ground, pairs);
}

LabelSet set_of(std::size_t n, unsigned mask) {
  LabelSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1u;
  return s;
}

// Direct reading of the definition on the matrix.
LabelSet oracle_fhat(const Matrix& m, const LabelSet& y) {
  LabelSet out(m.size());
  for (std::size_t z = 0; z < m.size(); ++z) {
    if (!y[z]) continue;
    for (std::size_t x = 0; x < m.size(); ++x) {
      if (y[x] && m[x][z]) out[z] = true;
    }
  }
  return out;
}

// Intersection over every cover of the ground set (families of subsets
// whose union is the ground) of the union of F-hat over the family.
LabelSet cover_intersection(const FiniteRelation& r) {
  const std::size_t n = r.size();
  const unsigned subsets = 1u << n;
  std::vector<LabelSet> fhat;
  for (unsigned s = 0; s < subsets; ++s) fhat.push_back(finite_fhat(r, set_of(n, s)));
  LabelSet result = r.full_set();
  // family: bitmask over the 2^n subsets (the empty subset is irrelevant).
  for (unsigned long family = 1; family < (1ul << subsets); ++family) {
    unsigned covered = 0;
    LabelSet u(n);
    for (unsigned s = 0; s < subsets; ++s) {
      if ((family >> s) & 1ul) {
        covered |= s;
        u |= fhat[s];
      }
    }
    if (covered == subsets - 1) result &= u;
  }
  return result;
}

class Identity final : public ImageEnclosure {
 public:
  explicit Identity(Box d) : d_(std::move(d)) {}
  const Box& domain() const override { return d_; }
  std::vector<Box> image(const Box& y) const override { return {y}; }

 private:
  Box d_;
};

Point pt(double x) {
  Point p(1);
  p << x;
  return p;
}

}  // namespace

TEST(FiniteFhat, Examples) {
  const FiniteRelation r({"a", "b"}, {{"a", "a"}, {"b", "a"}});
  EXPECT_EQ(r.labels_of(finite_fhat(r, r.subset({"a", "b"}))), (std::vector<std::string>{"a"}));
  EXPECT_TRUE(finite_fhat(r, r.empty_set()).none());
  EXPECT_EQ(r.labels_of(finite_fix(r)), (std::vector<std::string>{"a"}));

  const FiniteRelation empty({"a", "b", "c"}, {});
  EXPECT_TRUE(finite_fhat(empty, empty.full_set()).none());
  EXPECT_TRUE(finite_fix(empty).none());
}

TEST(FiniteFhat, Errors) {
  EXPECT_THROW(FiniteRelation({"a"}, {{"a", "b"}}), ElementNotInGround);
  EXPECT_THROW(FiniteRelation({"a", "a"}, {}), ElementNotInGround);
  const FiniteRelation r({"a", "b"}, {});
  EXPECT_THROW(r.subset({"z"}), ElementNotInGround);
  EXPECT_THROW(finite_fhat(r, LabelSet(3)), ElementNotInGround);
}

TEST(FiniteFhatProperty, AgreesWithDefinitionAndAlgebra) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Matrix m = random_matrix(rng, n);
    const FiniteRelation r = relation_of(m);
    const LabelSet fix = finite_fix(r);
    for (std::size_t x = 0; x < n; ++x) ASSERT_EQ(fix[x], m[x][x]);

    LabelSet union_of_singletons(n);
    for (std::size_t x = 0; x < n; ++x) union_of_singletons |= finite_fhat(r, set_of(n, 1u << x));
    ASSERT_EQ(union_of_singletons, fix);

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const LabelSet y = set_of(n, mask);
      const LabelSet f = finite_fhat(r, y);
      ASSERT_EQ(f, oracle_fhat(m, y));
      ASSERT_TRUE(f.is_subset_of(y));
      ASSERT_EQ(fix & y, fix & f);
      for (unsigned sub = mask;; sub = (sub - 1) & mask) {
        ASSERT_TRUE(finite_fhat(r, set_of(n, sub)).is_subset_of(f));
        if (sub == 0) break;
      }
    }
  }
}

TEST(FiniteFix, CoverIntersectionUpToThreeLabels) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const unsigned pairs = static_cast<unsigned>(n * n);
    for (unsigned code = 0; code < (1u << pairs); ++code) {
      Matrix m(n, std::vector<bool>(n));
      for (unsigned k = 0; k < pairs; ++k) m[k / n][k % n] = (code >> k) & 1u;
      const FiniteRelation r = relation_of(m);
      ASSERT_EQ(cover_intersection(r), finite_fix(r)) << "n=" << n << " code=" << code;
    }
  }
}

TEST(SegmentMap, StatusExamples) {
  const SegmentMap g = SegmentMap::harmonic();
  EXPECT_EQ(fhat_status(Box{{0.3, 0.4}}, g), FhatStatus::ProvedEmpty);
  EXPECT_EQ(fhat_status(Box{{0.3, 0.55}}, g), FhatStatus::Candidate);
  EXPECT_EQ(fhat_status(Box{{0.45, 0.55}}, g), FhatStatus::ProvedEmpty);
  EXPECT_EQ(fhat_status(Box{{0.0, 0.01}}, g), FhatStatus::Candidate);
}

TEST(SegmentMap, ImageNearTopSegment) {
  const SegmentMap g = SegmentMap::harmonic();
  const auto img = g.image(Box{{0.45, 0.55}});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_EQ(img[0], Box::from_point(pt(1.0 / 3.0)));
}

TEST(SegmentMap, TailBoxNearZero) {
  const SegmentMap g = SegmentMap::harmonic();
  const auto img = g.image(Box{{0.0, 0.01}});
  bool has_origin = false;
  for (const auto& b : img) has_origin = has_origin || b.contains(pt(0.0));
  EXPECT_TRUE(has_origin);
}

TEST(SegmentMap, ResidualAtLeftEndpoints) {
  const SegmentMap g = SegmentMap::harmonic();
  for (std::size_t i : {1, 2, 3, 10, 100, 1000, 65536}) {
    const double a = 1.0 / static_cast<double>(2 * i + 1);
    const double b = 1.0 / static_cast<double>(2 * i);
    EXPECT_GE(g.residual(pt(a)), b - a) << i;
    EXPECT_LE(g.residual(pt(a)), std::nextafter(b - a, 1.0)) << i;
  }
  EXPECT_EQ(g.residual(pt(0.0)), 0.0);
  EXPECT_TRUE(std::isinf(g.residual(pt(0.6))));  // between 1/2 and 1: a gap
}

TEST(SegmentMap, RejectsBadSegments) {
  EXPECT_THROW(SegmentMap({{0.2, 0.4}, {0.3, 0.5}}, 0.1), InvalidSegments);
  EXPECT_THROW(SegmentMap({{0.3, 0.3}}, 0.1), InvalidSegments);
  EXPECT_THROW(SegmentMap({{0.3, 0.4}}, 0.35), InvalidSegments);
  EXPECT_NO_THROW(SegmentMap({{0.5, 0.6}, {0.2, 0.4}}, 0.1));
}

TEST(PointMap, Examples) {
  const PointMap half(Box{{0, 1}}, {parse_expr("x / 2", {"x"})});
  const auto img = half.image(Box{{0.5, 1}});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_EQ(img[0], (Box{{0.25, 0.5}}));

  // Root of cos(x) - x by bisection.
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 100; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::cos(mid) - mid > 0.0 ? lo : hi) = mid;
  }
  const PointMap c(Box{{0, 1}}, {parse_expr("cos(x)", {"x"})});
  EXPECT_LE(c.residual(pt(lo)), 1e-6);

  const PointMap id(Box{{0, 1}, {0, 1}}, {parse_expr("a", {"a", "b"}), parse_expr("b", {"a", "b"})});
  EXPECT_EQ(id.image(Box{{0.1, 0.2}, {0.3, 0.4}})[0], (Box{{0.1, 0.2}, {0.3, 0.4}}));
  Point p(2);
  p << 0.3, 0.7;
  EXPECT_EQ(id.residual(p), 0.0);
}

TEST(PointMap, Support) {
  const PointMap partial = pointmap_as_multimap({parse_expr("x / 2", {"x"})}, Box{{0, 1}}, Box{{0.2, 1}});
  EXPECT_TRUE(partial.image(Box{{0, 0.1}}).empty());
  EXPECT_TRUE(std::isinf(partial.residual(pt(0.1))));
  EXPECT_DOUBLE_EQ(partial.residual(pt(0.2)), 0.1);
  EXPECT_THROW(PointMap(Box{{0, 1}}, {}), DimensionMismatch);
}

TEST(FhatStatus, IdentityIsAlwaysCandidate) {
  const Identity id(Box{{0, 1}, {0, 1}});
  EXPECT_EQ(fhat_status(Box{{0.1, 0.2}, {0.5, 0.5}}, id), FhatStatus::Candidate);
  EXPECT_THROW(fhat_status(Box{{0.5, 2}, {0, 1}}, id), OracleFailure);
}

TEST(FhatStatus, OracleErrorsBecomeOracleFailure) {
  const PointMap inv(Box{{-1, 1}}, {parse_expr("1 / x", {"x"})});
  EXPECT_THROW(fhat_status(Box{{-0.5, 0.5}}, inv), OracleFailure);
}

TEST(FhatStatusProperty, ProvedEmptyBoxesHoldNoFixedPoint) {
  const SegmentMap g = SegmentMap::harmonic();
  const PointMap partial(Box{{0, 1}}, {parse_expr("x / 2", {"x"})}, Box{{0.2, 1}});
  const PointMap c(Box{{0, 1}}, {parse_expr("cos(x)", {"x"})});
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const Box y{{a, b}};
    for (const SetValuedMap* m : {static_cast<const SetValuedMap*>(&g), static_cast<const SetValuedMap*>(&partial),
                                  static_cast<const SetValuedMap*>(&c)}) {
      if (fhat_status(y, *m) != FhatStatus::ProvedEmpty) continue;
      for (int k = 0; k <= 64; ++k) {
        const double x = a + (b - a) * k / 64.0;
        ASSERT_GT(m->residual(pt(x)), 0.0) << "box [" << a << ", " << b << "] at " << x;
      }
    }
  }
}
