#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixpave/json_io.hpp"

namespace fixpave {

/// Explicit finite partial order with a least element.
class FinitePoset {
 public:
  using Order = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

  /// Directed-subset checks enumerate subsets only up to this many elements.
  static constexpr std::size_t kExhaustiveLimit = 12;

  /// `leq_pairs` (a, b) meaning a <= b generate the order by reflexive-
  /// transitive closure. Throws InvalidPoset on a cycle, a missing least
  /// element, a wrong `bottom`, or a directed subset without a supremum.
  FinitePoset(std::vector<std::string> labels,
              const std::vector<std::pair<std::size_t, std::size_t>>& leq_pairs,
              std::optional<std::size_t> bottom = std::nullopt);

  /// Subsets of {1..n} under inclusion, labelled "{}", "{1}", "{1,2}", ...
  /// Element index is the bitmask of the subset.
  static FinitePoset powerset(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  /// Throws InvalidPoset for unknown labels.
  std::size_t index_of(const std::string& label) const;
  bool leq(std::size_t a, std::size_t b) const { return order_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); }
  std::size_t bottom() const noexcept { return bottom_; }
  /// False when the poset was too large for the exhaustive completeness check.
  bool completeness_verified() const noexcept { return verified_; }

  /// Least upper bound of the given elements, if any.
  std::optional<std::size_t> sup(const std::vector<std::size_t>& elements) const;
  /// Every pair has an upper bound inside the set (nonempty sets only).
  bool is_directed(const std::vector<std::size_t>& elements) const;

 private:
  FinitePoset(std::vector<std::string> labels, Order order);
  void finish(std::optional<std::size_t> bottom);

  std::vector<std::string> labels_;
  Order order_;
  std::size_t bottom_ = 0;
  bool verified_ = false;
};

/// f as the image index of each element.
using ElementMap = std::vector<std::size_t>;

struct ContinuityViolation {
  enum class Kind { NotMonotone, SupNotPreserved };
  Kind kind;
  /// NotMonotone: (x, y) with x <= y but not f(x) <= f(y).
  /// SupNotPreserved: the offending directed subset.
  std::vector<std::size_t> witness;
};

/// nullopt when f is monotone and preserves sups of all directed subsets.
/// Throws PosetTooLarge above kExhaustiveLimit unless monotone_only is set,
/// in which case only monotonicity is checked.
std::optional<ContinuityViolation> check_scott_continuity(const FinitePoset& p, const ElementMap& f,
                                                          bool monotone_only = false);

/// sup{f^n(bottom)}: iterate from the least element until f^n = f^{n+1}.
/// Throws NonStabilizing if no repeat occurs within |P| steps.
std::size_t kleene_lfp(const FinitePoset& p, const ElementMap& f);

/// {sup_n f^n(x) | x <= f(x)}, sorted by element index.
std::vector<std::size_t> fixpoints_via_prefixed(const FinitePoset& p, const ElementMap& f);

/// {x | f(x) = x} by enumeration.
std::vector<std::size_t> brute_force_fixpoints(const ElementMap& f);

struct PosetProblem {
  FinitePoset poset;
  ElementMap map;
};

/// Either {elements, leq_pairs, bottom, map: {a: b, ...}} or the powerset
/// shorthand {powerset_of: n, map: "reachability", seeds: [...], edges: [[i, j], ...]}
/// with f(S) = seeds u succ(S). Throws SchemaError naming the JSON path.
PosetProblem poset_problem_from_json(const Json& j, const std::string& pointer = "");

}  // namespace fixpave
