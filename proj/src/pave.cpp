#include "fixpave/pave.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <stdexcept>

#include "fixpave/parallel.hpp"

namespace fixpave {

namespace {

// Largest box dimension for which corners are probed.
constexpr std::size_t kMaxCornerDims = 16;

std::string shortest(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double cover_diameter(const std::vector<Box>& boxes) {
  double d = 0.0;
  for (const auto& b : boxes) d = std::max(d, b.diameter());
  return d;
}

}  // namespace

void PaveConfig::validate() const {
  if (!(delta_min > 0.0)) throw std::invalid_argument("delta_min must be positive");
  if (max_boxes == 0) throw std::invalid_argument("max_boxes must be positive");
  if (max_oracle_calls == 0) throw std::invalid_argument("max_oracle_calls must be positive");
}

Paving enclose_fixed_points(const ImageEnclosure& m, const Box& domain, const PaveConfig& cfg,
                            const LevelObserver& observer) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  Paving p;
  std::vector<Box> work{domain};

  for (;;) {
    p.delta = cover_diameter(work);
    if (p.stats.oracle_calls + work.size() > cfg.max_oracle_calls) {
      p.candidates = std::move(work);
      p.complete = false;
      break;
    }
    std::vector<FhatStatus> status(work.size());
    detail::parallel_for(work.size(), cfg.threads,
                         [&](std::size_t i) { status[i] = fhat_status(work[i], m); });
    p.stats.oracle_calls += work.size();

    p.candidates.clear();
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (status[i] == FhatStatus::Candidate) {
        p.candidates.push_back(std::move(work[i]));
      } else {
        ++p.pruned_count;
        if (cfg.keep_pruned) p.pruned.push_back(std::move(work[i]));
      }
    }
    if (observer) observer(p);

    const bool fine = std::all_of(p.candidates.begin(), p.candidates.end(),
                                  [&](const Box& b) { return b.diameter() <= cfg.delta_min; });
    if (p.candidates.empty() || fine) break;

    std::vector<Box> next;
    next.reserve(2 * p.candidates.size());
    for (const auto& b : p.candidates) {
      if (b.diameter() <= cfg.delta_min) {
        next.push_back(b);
      } else {
        auto [left, right] = bisect(b);
        next.push_back(std::move(left));
        next.push_back(std::move(right));
      }
    }
    if (next.size() > cfg.max_boxes) {
      p.complete = false;
      break;
    }
    work = std::move(next);
    ++p.level;
  }

  p.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return p;
}

EmptinessResult certify_empty(const ImageEnclosure& m, const Box& domain, const PaveConfig& cfg) {
  EmptinessResult r;
  r.paving = enclose_fixed_points(m, domain, cfg);
  r.certified_empty = r.paving.candidates.empty();
  return r;
}

std::optional<ApproxFixedPoint> approx_fixed_point(const PointResidualOracle& oracle,
                                                   const Paving& paving, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  for (const auto& box : paving.candidates) {
    const Point center = box.midpoint();
    if (const double r = oracle.residual(center); r <= delta) return ApproxFixedPoint{center, r};
    if (box.size() > kMaxCornerDims) continue;
    for (const auto& corner : corners(box)) {
      if (const double r = oracle.residual(corner); r <= delta) return ApproxFixedPoint{corner, r};
    }
  }
  return std::nullopt;
}

Json to_json(const Paving& p) {
  Json boxes = Json::array();
  for (const auto& b : p.candidates) boxes.push_back(to_json(b));
  return Json{{"level", p.level},
              {"delta", p.delta},
              {"candidates", std::move(boxes)},
              {"pruned_count", p.pruned_count},
              {"complete", p.complete}};
}

std::string paving_csv(const Paving& p, std::size_t dimension) {
  std::string out = "level";
  if (dimension == 1) {
    out += ",lo,hi";
  } else {
    for (std::size_t i = 0; i < dimension; ++i) {
      out += ",lo" + std::to_string(i) + ",hi" + std::to_string(i);
    }
  }
  out += '\n';
  for (const auto& b : p.candidates) {
    out += std::to_string(p.level);
    for (const auto& x : b) out += "," + shortest(x.lo()) + "," + shortest(x.hi());
    out += '\n';
  }
  return out;
}

}  // namespace fixpave
