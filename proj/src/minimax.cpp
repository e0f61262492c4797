#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "fixpave/errors.hpp"
#include "fixpave/games.hpp"

namespace fixpave {

namespace {

constexpr std::size_t kInnerSteps = 5000;
constexpr std::size_t kOuterSteps = 20000;

Box with_components(const Box& box, const std::vector<std::size_t>& dims, const Box& sub) {
  std::vector<Interval> out = box.dims();
  for (std::size_t k = 0; k < dims.size(); ++k) out[dims[k]] = sub[k];
  return Box(std::move(out));
}

struct InnerMax {
  double lower;  // best lb at a probed inner point
  double upper;  // max over live inner boxes of ub
  Box witness;   // the probed inner point reaching `lower`
};

// Bounds on max over the inner variables of e with the outer variables fixed
// by `outer` (normally a point).
InnerMax inner_max(const Expr& e, const Box& outer, const std::vector<std::size_t>& inner_dims, const Box& inner,
                   double tol) {
  struct Live {
    Box sub;
    double ub;
    bool operator<(const Live& o) const { return ub < o.ub; }
  };
  InnerMax out{-std::numeric_limits<double>::infinity(), 0.0, Box::from_point(inner.midpoint())};
  auto probe = [&](const Box& sub) {
    const Box mid = Box::from_point(sub.midpoint());
    if (const double lb = eval_interval(e, with_components(outer, inner_dims, mid)).lo(); lb > out.lower) {
      out.lower = lb;
      out.witness = mid;
    }
    return eval_interval(e, with_components(outer, inner_dims, sub)).hi();
  };

  std::priority_queue<Live> live;
  live.push({inner, probe(inner)});
  for (std::size_t step = 0; step < kInnerSteps; ++step) {
    const Live& top = live.top();
    if (top.ub - out.lower <= tol || top.sub.diameter() == 0.0) break;
    const auto [left, right] = bisect(top.sub);
    live.pop();
    for (const Box& child : {left, right}) {
      const double ub = probe(child);
      if (ub >= out.lower) live.push({child, ub});
    }
    if (live.empty()) break;
  }
  out.upper = live.empty() ? out.lower : live.top().ub;
  return out;
}

struct MinMax {
  Interval bounds;
  bool converged;
};

// min over outer_dims of max over inner_dims of e, both parts of `box`.
// The incumbent is the certified inner maximum at a box center; a box's lower
// bound is lb(e) over the box with the inner variables fixed at the center's
// maximizer, since max over inner >= value at any inner point.
MinMax min_of_max(const Expr& e, const Box& box, const std::vector<std::size_t>& outer_dims,
                  const std::vector<std::size_t>& inner_dims, double tol) {
  const Box inner = select(box, inner_dims);
  const double inner_tol = tol / 4.0;

  struct Live {
    Box sub;
    double lb;
    bool operator>(const Live& o) const { return lb > o.lb; }
  };
  double best = std::numeric_limits<double>::infinity();
  auto visit = [&](const Box& sub, double floor) {
    const Box center = with_components(box, outer_dims, Box::from_point(sub.midpoint()));
    const InnerMax m = inner_max(e, center, inner_dims, inner, inner_tol);
    best = std::min(best, m.upper);
    const Box at = with_components(with_components(box, outer_dims, sub), inner_dims, m.witness);
    return Live{sub, std::max(floor, eval_interval(e, at).lo())};
  };

  std::priority_queue<Live, std::vector<Live>, std::greater<>> live;
  live.push(visit(select(box, outer_dims), -std::numeric_limits<double>::infinity()));
  bool converged = false;
  for (std::size_t step = 0; step < kOuterSteps; ++step) {
    const Live& top = live.top();
    if (best - top.lb <= tol) {
      converged = true;
      break;
    }
    if (top.sub.diameter() == 0.0) break;
    const auto [left, right] = bisect(top.sub);
    const double floor = top.lb;
    live.pop();
    for (const Box& child : {left, right}) {
      Live l = visit(child, floor);
      if (l.lb <= best) live.push(std::move(l));
    }
    if (live.empty()) {
      converged = true;
      break;
    }
  }
  const double lower = live.empty() ? best : std::min(live.top().lb, best);
  return {Interval(lower, best), converged};
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

}  // namespace

MinimaxGap minimax_gap(const Expr& phi, const Box& u, const Box& v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("minimax tol must be positive");
  const Box box = concat(u, v);
  if (variable_extent(phi) > box.size()) throw DimensionMismatch(box.size(), variable_extent(phi));
  const auto u_dims = range(0, u.size());
  const auto v_dims = range(u.size(), box.size());

  const MinMax upper = min_of_max(phi, box, u_dims, v_dims, tol);
  // max_v min_u phi = -(min_v max_u -phi)
  const MinMax lower = min_of_max(Expr::unary(Expr::Op::Neg, phi), box, v_dims, u_dims, tol);

  MinimaxGap gap;
  gap.minmax_bounds = upper.bounds;
  gap.maxmin_bounds = -lower.bounds;
  gap.minmax = upper.bounds.hi();
  gap.maxmin = gap.maxmin_bounds.lo();
  gap.converged = upper.converged && lower.converged;
  return gap;
}

}  // namespace fixpave
