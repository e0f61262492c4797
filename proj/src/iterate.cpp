#include "fixpave/iterate.hpp"

#include <stdexcept>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace {

Point apply_map(const std::vector<Expr>& f, const Point& x) {
  Point y(x.size());
  for (std::size_t i = 0; i < f.size(); ++i) y[static_cast<Eigen::Index>(i)] = eval_point(f[i], x);
  return y;
}

}  // namespace

IterResult iterate_to_limit(const std::vector<Expr>& f, const Point& x0, double tol,
                            std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (f.size() != static_cast<std::size_t>(x0.size())) {
    throw DimensionMismatch(static_cast<std::size_t>(x0.size()), f.size());
  }
  IterResult r;
  Point x = x0;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    Point next = apply_map(f, x);
    const double step = chebyshev_distance(next, x);
    x = std::move(next);
    r.iterations = n;
    if (step <= tol / 2) {
      r.residual = chebyshev_distance(x, apply_map(f, x));
      if (r.residual <= tol) {
        r.converged = true;
        break;
      }
    }
  }
  if (!r.converged && r.iterations > 0) r.residual = chebyshev_distance(x, apply_map(f, x));
  r.limit = std::move(x);
  return r;
}

}  // namespace fixpave
