#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fixpave/games.hpp"
#include "fixpave/poset.hpp"

namespace testsupport {

// Intersection-closed family of subsets of {0..bits-1} containing the full
// set, ordered by inclusion: a complete lattice.
struct Lattice {
  std::vector<unsigned> sets;
  fixpave::FinitePoset poset;
};

inline Lattice random_lattice(std::mt19937_64& rng, std::size_t max_size) {
  for (;;) {
    const unsigned bits = 1 + static_cast<unsigned>(rng() % 4);
    const unsigned full = (1u << bits) - 1;
    std::set<unsigned> family{full};
    const std::size_t draws = 1 + rng() % 5;
    for (std::size_t i = 0; i < draws; ++i) family.insert(static_cast<unsigned>(rng() & full));
    for (bool grew = true; grew;) {
      grew = false;
      for (unsigned a : std::vector<unsigned>(family.begin(), family.end())) {
        for (unsigned b : std::vector<unsigned>(family.begin(), family.end())) {
          grew = family.insert(a & b).second || grew;
        }
      }
    }
    if (family.size() > max_size) continue;

    std::vector<unsigned> sets(family.begin(), family.end());
    std::stable_sort(sets.begin(), sets.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      labels.push_back("s" + std::to_string(sets[i]));
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if ((sets[i] & ~sets[j]) == 0) pairs.emplace_back(i, j);
      }
    }
    return {sets, fixpave::FinitePoset(labels, pairs, std::size_t{0})};
  }
}

// Least member containing `mask` (the family is intersection closed).
inline std::size_t closure(const Lattice& l, unsigned mask) {
  unsigned meet = l.sets.back();
  for (unsigned s : l.sets) {
    if ((mask & ~s) == 0) meet &= s;
  }
  return static_cast<std::size_t>(std::find(l.sets.begin(), l.sets.end(), meet) - l.sets.begin());
}

// Monotone by construction: elements are visited in a linear extension and
// f(x) is drawn above the join of f over everything strictly below x.
inline fixpave::ElementMap random_monotone(std::mt19937_64& rng, const Lattice& l, bool extensive) {
  const std::size_t n = l.sets.size();
  fixpave::ElementMap f(n);
  for (std::size_t x = 0; x < n; ++x) {
    unsigned floor = extensive ? l.sets[x] : 0u;
    for (std::size_t y = 0; y < x; ++y) {
      if (y != x && (l.sets[y] & ~l.sets[x]) == 0) floor |= l.sets[f[y]];
    }
    const unsigned lower = l.sets[closure(l, floor)];
    std::vector<std::size_t> options;
    for (std::size_t z = 0; z < n; ++z) {
      if ((lower & ~l.sets[z]) == 0) options.push_back(z);
    }
    f[x] = options[rng() % options.size()];
  }
  return f;
}

// Grid values shared by both players' oracles: lo + (hi - lo) * k / (m - 1).
inline std::vector<double> grid_values(const fixpave::Interval& x, std::size_t m) {
  std::vector<double> out;
  for (std::size_t k = 0; k < m; ++k) {
    out.push_back(m == 1 ? x.mid() : x.lo() + (x.hi() - x.lo()) * static_cast<double>(k) / static_cast<double>(m - 1));
  }
  return out;
}

using GridPoint = std::pair<double, double>;

// Saddle points (saddle mode) or Nash equilibria of a two-player game with
// scalar strategies, restricted to an m x m grid, straight from the defining
// inequalities.
inline std::set<GridPoint> grid_equilibria(const fixpave::GameSpec& g, std::size_t m) {
  const auto us = grid_values(g.players()[0].box[0], m);
  const auto vs = grid_values(g.players()[1].box[0], m);
  auto at = [](const fixpave::Expr& e, double u, double v) {
    fixpave::Point p(2);
    p << u, v;
    return fixpave::eval_point(e, p);
  };
  std::set<GridPoint> out;
  for (double u : us) {
    for (double v : vs) {
      bool ok = true;
      if (g.mode() == fixpave::GameMode::Saddle) {
        const auto& phi = g.payoffs()[0];
        const double value = at(phi, u, v);
        for (double w : vs) ok = ok && at(phi, u, w) <= value;
        for (double w : us) ok = ok && value <= at(phi, w, v);
      } else {
        const auto& j1 = g.payoffs()[0];
        const auto& j2 = g.payoffs()[1];
        for (double w : us) ok = ok && at(j1, w, v) <= at(j1, u, v);
        for (double w : vs) ok = ok && at(j2, u, w) <= at(j2, u, v);
      }
      if (ok) out.insert({u, v});
    }
  }
  return out;
}

inline std::set<GridPoint> grid_fixed_points(const fixpave::GridGame& g) {
  std::set<GridPoint> out;
  const auto fix = fixpave::finite_fix(g.best_response);
  for (std::size_t k = 0; k < g.points.size(); ++k) {
    if (fix[k]) out.insert({g.points[k][0], g.points[k][1]});
  }
  return out;
}

// phi = a u^2 + b v^2 + c u v + d u + e v with small integer-ish coefficients.
inline std::string random_bilinear_quadratic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  auto term = [&](const char* monomial) { return "(" + std::to_string(coef(rng)) + ")*" + monomial; };
  return term("u^2") + " + " + term("v^2") + " + " + term("u*v") + " + " + term("u") + " + " + term("v");
}

}  // namespace testsupport
