#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixpave/box.hpp"
#include "fixpave/expr.hpp"

namespace fixpave {

// ---------------------------------------------------------------------------
// Finite relations: exact F-hat and Fix on finite ground sets.

using LabelSet = boost::dynamic_bitset<>;

/// y in F(x) iff images()[x] has bit y set. Immutable.
class FiniteRelation {
 public:
  /// Labels must be unique. Pairs (x, y) mean y in F(x); every member must
  /// be a label (ElementNotInGround otherwise).
  FiniteRelation(std::vector<std::string> ground,
                 const std::vector<std::pair<std::string, std::string>>& pairs);
  /// Ground {0, ..., images.size()-1} labelled by index; each image must have
  /// images.size() bits.
  explicit FiniteRelation(std::vector<LabelSet> images);

  std::size_t size() const noexcept { return images_.size(); }
  const std::vector<std::string>& ground() const noexcept { return ground_; }
  const LabelSet& image(std::size_t x) const { return images_.at(x); }
  bool related(std::size_t x, std::size_t y) const { return images_.at(x).test(y); }

  LabelSet empty_set() const { return LabelSet(size()); }
  LabelSet full_set() const { return ~LabelSet(size()); }
  /// Throws ElementNotInGround for unknown labels.
  LabelSet subset(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(const LabelSet& s) const;

 private:
  std::vector<std::string> ground_;
  std::vector<LabelSet> images_;
};

/// (U_{y in Y} F(y)) n Y. Throws ElementNotInGround when Y is not a subset
/// of the ground set.
LabelSet finite_fhat(const FiniteRelation& r, const LabelSet& y);

/// {x | x in F(x)}.
LabelSet finite_fix(const FiniteRelation& r);

// ---------------------------------------------------------------------------
// Box-level oracles.

/// Sound cover of the image of a set-valued map over a box.
///
/// Implementations must return boxes whose union contains U_{y in Y} F(y)
/// for every Y inside domain(), and must tolerate concurrent calls.
class ImageEnclosure {
 public:
  virtual ~ImageEnclosure() = default;
  virtual const Box& domain() const = 0;
  virtual std::vector<Box> image(const Box& y) const = 0;
};

/// d(x, F(x)) or an upper bound of it; +inf when F(x) is empty.
class PointResidualOracle {
 public:
  virtual ~PointResidualOracle() = default;
  virtual double residual(const Point& x) const = 0;
};

class SetValuedMap : public ImageEnclosure, public PointResidualOracle {};

enum class FhatStatus { ProvedEmpty, Candidate };

/// ProvedEmpty only when no returned image box meets y, which proves that
/// F-hat(y) is empty and y holds no fixed point. Oracle errors are rethrown
/// as OracleFailure.
FhatStatus fhat_status(const Box& y, const ImageEnclosure& m);

/// Single-valued map F(x) = {f(x)} on a box, optionally defined only on a
/// support box (F(x) is empty outside it).
class PointMap final : public SetValuedMap {
 public:
  /// One component per domain dimension; variable i is coordinate i.
  PointMap(Box domain, std::vector<Expr> components, std::optional<Box> support = std::nullopt);

  const Box& domain() const override { return domain_; }
  std::vector<Box> image(const Box& y) const override;
  double residual(const Point& x) const override;

  Point apply(const Point& x) const;
  const std::vector<Expr>& components() const noexcept { return components_; }

 private:
  Box domain_;
  std::vector<Expr> components_;
  std::optional<Box> support_;
};

PointMap pointmap_as_multimap(std::vector<Expr> components, Box domain,
                              std::optional<Box> support = std::nullopt);

}  // namespace fixpave
