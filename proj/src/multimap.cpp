#include "fixpave/multimap.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fixpave/errors.hpp"

namespace fixpave {

FiniteRelation::FiniteRelation(std::vector<std::string> ground,
                               const std::vector<std::pair<std::string, std::string>>& pairs)
    : ground_(std::move(ground)), images_(ground_.size(), LabelSet(ground_.size())) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    if (!index.emplace(ground_[i], i).second) {
      throw ElementNotInGround("duplicate label '" + ground_[i] + "'");
    }
  }
  auto lookup = [&index](const std::string& label) {
    const auto it = index.find(label);
    if (it == index.end()) throw ElementNotInGround("'" + label + "' is not in the ground set");
    return it->second;
  };
  for (const auto& [x, y] : pairs) images_[lookup(x)].set(lookup(y));
}

FiniteRelation::FiniteRelation(std::vector<LabelSet> images) : images_(std::move(images)) {
  ground_.reserve(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i].size() != images_.size()) {
      throw ElementNotInGround("image of " + std::to_string(i) + " is not a subset of the ground set");
    }
    ground_.push_back(std::to_string(i));
  }
}

LabelSet FiniteRelation::subset(const std::vector<std::string>& labels) const {
  LabelSet s(size());
  for (const auto& label : labels) {
    const auto it = std::find(ground_.begin(), ground_.end(), label);
    if (it == ground_.end()) throw ElementNotInGround("'" + label + "' is not in the ground set");
    s.set(static_cast<std::size_t>(it - ground_.begin()));
  }
  return s;
}

std::vector<std::string> FiniteRelation::labels_of(const LabelSet& s) const {
  std::vector<std::string> out;
  for (auto i = s.find_first(); i != LabelSet::npos; i = s.find_next(i)) out.push_back(ground_.at(i));
  return out;
}

LabelSet finite_fhat(const FiniteRelation& r, const LabelSet& y) {
  if (y.size() != r.size()) {
    throw ElementNotInGround("subset has " + std::to_string(y.size()) + " slots, ground set has " +
                             std::to_string(r.size()));
  }
  LabelSet reach(r.size());
  for (auto i = y.find_first(); i != LabelSet::npos; i = y.find_next(i)) reach |= r.image(i);
  return reach & y;
}

LabelSet finite_fix(const FiniteRelation& r) {
  LabelSet fix(r.size());
  for (std::size_t x = 0; x < r.size(); ++x) {
    if (r.related(x, x)) fix.set(x);
  }
  return fix;
}

FhatStatus fhat_status(const Box& y, const ImageEnclosure& m) {
  if (!m.domain().contains(y)) throw OracleFailure("queried box lies outside the map's domain");
  std::vector<Box> images;
  try {
    images = m.image(y);
  } catch (const OracleFailure&) {
    throw;
  } catch (const Error& e) {
    throw OracleFailure(std::string("image oracle failed: ") + e.what());
  }
  for (const auto& b : images) {
    if (overlaps(b, y)) return FhatStatus::Candidate;
  }
  return FhatStatus::ProvedEmpty;
}

PointMap::PointMap(Box domain, std::vector<Expr> components, std::optional<Box> support)
    : domain_(std::move(domain)), components_(std::move(components)), support_(std::move(support)) {
  if (components_.size() != domain_.size()) {
    throw DimensionMismatch(domain_.size(), components_.size());
  }
  for (const auto& c : components_) {
    if (variable_extent(c) > domain_.size()) throw DimensionMismatch(domain_.size(), variable_extent(c));
  }
  if (support_ && support_->size() != domain_.size()) {
    throw DimensionMismatch(domain_.size(), support_->size());
  }
}

std::vector<Box> PointMap::image(const Box& y) const {
  std::optional<Box> where = y;
  if (support_) where = intersect(y, *support_);
  if (!where) return {};
  std::vector<Interval> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(eval_interval(c, *where));
  return {Box(std::move(out))};
}

Point PointMap::apply(const Point& x) const {
  Point fx(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) {
    fx[static_cast<Eigen::Index>(i)] = eval_point(components_[i], x);
  }
  return fx;
}

double PointMap::residual(const Point& x) const {
  if (support_ && !support_->contains(x)) return std::numeric_limits<double>::infinity();
  return chebyshev_distance(x, apply(x));
}

PointMap pointmap_as_multimap(std::vector<Expr> components, Box domain, std::optional<Box> support) {
  return PointMap(std::move(domain), std::move(components), std::move(support));
}

}  // namespace fixpave
