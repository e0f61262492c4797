#pragma once

#include <cstddef>
#include <vector>

#include "fixpave/box.hpp"
#include "fixpave/expr.hpp"

namespace fixpave {

struct IterResult {
  Point limit;
  std::size_t iterations = 0;
  /// Chebyshev distance between limit and f(limit).
  double residual = 0.0;
  bool converged = false;
};

/// Iterate x_{n+1} = f(x_n) from x0. Converged when a step moves at most
/// tol/2 and the residual at the new point is at most tol. Evaluation errors
/// propagate as EvaluationError.
IterResult iterate_to_limit(const std::vector<Expr>& f, const Point& x0, double tol,
                            std::size_t max_iter);

}  // namespace fixpave
