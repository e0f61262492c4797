#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fixpave/box.hpp"
#include "fixpave/json_io.hpp"
#include "fixpave/multimap.hpp"

namespace fixpave {

struct PaveConfig {
  double delta_min = 0x1p-10;
  std::size_t max_boxes = 1'000'000;
  std::size_t max_oracle_calls = 50'000'000;
  unsigned threads = 1;
  /// Keep pruned boxes in Paving::pruned (for plotting).
  bool keep_pruned = false;

  /// Throws std::invalid_argument unless delta_min > 0 and budgets are positive.
  void validate() const;
};

struct PaveStats {
  std::size_t oracle_calls = 0;
  double wall_seconds = 0.0;
};

/// Candidate boxes of a bisection paving after F-hat filtering.
///
/// Fix(F) n domain lies in the union of candidates, also when the paving is
/// incomplete (a budget stopped refinement early).
struct Paving {
  std::size_t level = 0;
  /// Diameter of the cover at `level`; bounds every candidate's diameter.
  double delta = 0.0;
  std::vector<Box> candidates;
  std::size_t pruned_count = 0;
  bool complete = true;
  std::vector<Box> pruned;
  PaveStats stats;
};

/// Called once per level after filtering, with that level's paving.
using LevelObserver = std::function<void(const Paving&)>;

/// Refine {domain} level by level: drop boxes proved free of fixed points and
/// bisect the rest until every candidate has diameter <= delta_min or a budget
/// is hit. Oracle errors propagate as OracleFailure.
Paving enclose_fixed_points(const ImageEnclosure& m, const Box& domain, const PaveConfig& cfg,
                            const LevelObserver& observer = {});

struct EmptinessResult {
  /// True when the candidate list became empty, proving Fix(F) n domain = {}.
  bool certified_empty = false;
  Paving paving;
};

EmptinessResult certify_empty(const ImageEnclosure& m, const Box& domain, const PaveConfig& cfg);

struct ApproxFixedPoint {
  Point point;
  double residual = 0.0;
};

/// First probe with residual <= delta, probing each candidate's center and
/// then its corners. nullopt does not prove that no fixed point exists.
std::optional<ApproxFixedPoint> approx_fixed_point(const PointResidualOracle& oracle,
                                                   const Paving& paving, double delta);

/// {level, delta, candidates, pruned_count, complete}.
Json to_json(const Paving& p);

/// One row per candidate: level,lo,hi (1-D) or level,lo0,hi0,lo1,hi1,...
std::string paving_csv(const Paving& p, std::size_t dimension);

}  // namespace fixpave
