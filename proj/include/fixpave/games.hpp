#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fixpave/box.hpp"
#include "fixpave/expr.hpp"
#include "fixpave/json_io.hpp"
#include "fixpave/multimap.hpp"
#include "fixpave/pave.hpp"

namespace fixpave {

struct Player {
  std::string name;
  Box box;
  /// Variable names for the player's coordinates, one per box dimension.
  /// Empty means: the player name for 1-D boxes, name_1..name_d otherwise.
  std::vector<std::string> vars;
};

enum class GameMode { Saddle, Nash };

/// Normal-form game on a product of strategy boxes.
///
/// Saddle mode: two players and one payoff phi; the first player minimizes
/// phi, the second maximizes it. Nash mode: payoff i is maximized by player i.
/// Payoffs range over all players' variables, in player order.
class GameSpec {
 public:
  /// Throws InvalidGame on shape errors; payoff parse errors propagate as is.
  GameSpec(GameMode mode, std::vector<Player> players, const std::vector<std::string>& payoffs);

  GameMode mode() const noexcept { return mode_; }
  const std::vector<Player>& players() const noexcept { return players_; }
  const std::vector<Expr>& payoffs() const noexcept { return payoffs_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  /// Product of the strategy boxes.
  const Box& domain() const noexcept { return domain_; }
  /// Coordinates of player i inside domain().
  const std::vector<std::size_t>& dims(std::size_t player) const { return dims_.at(player); }

  /// What player i minimizes: phi / -phi in saddle mode, -J_i in Nash mode.
  Expr objective(std::size_t player) const;

 private:
  GameMode mode_;
  std::vector<Player> players_;
  std::vector<std::string> variables_;
  std::vector<Expr> payoffs_;
  std::vector<std::vector<std::size_t>> dims_;
  Box domain_;
};

/// {mode, players: [{name, box, vars?}], payoff | payoffs}.
GameSpec game_from_json(const Json& j, const std::string& pointer = "",
                        const JsonDocument* doc = nullptr);

struct ArgoptConfig {
  /// Bisection rounds applied to the optimization box.
  unsigned depth = 10;
  /// Grid step of the sampled best responses used by residuals.
  double tol = 1e-3;

  void validate() const;
};

/// Boxes (over opt_dims only) covering, for every parameter value in the other
/// components of `box`, every minimizer of e over the opt_dims components.
/// Sub-boxes are bisected `depth` times; B is dropped when lb(e on B x P)
/// exceeds min over B' of ub(e on B' x P). The parameter box P is first cut
/// into at most kMaxParamPieces pieces no wider than the final sub-box width.
inline constexpr std::size_t kMaxParamPieces = 64;
std::vector<Box> argmin_enclosure(const Expr& e, const Box& box,
                                  const std::vector<std::size_t>& opt_dims, const ArgoptConfig& cfg);
std::vector<Box> argmax_enclosure(const Expr& e, const Box& box,
                                  const std::vector<std::size_t>& opt_dims, const ArgoptConfig& cfg);

/// x -> product over players of their best responses to x_{-i}.
class BestResponseMap final : public SetValuedMap {
 public:
  /// Boxes per player kept before falling back to the player's hull.
  static constexpr std::size_t kMaxPlayerBoxes = 8;

  BestResponseMap(GameSpec game, ArgoptConfig cfg);

  const Box& domain() const override { return game_.domain(); }
  std::vector<Box> image(const Box& y) const override;
  /// Chebyshev distance from x to the nearest sampled best response.
  double residual(const Point& x) const override;

  struct Response {
    Point point;
    double distance = 0.0;
  };
  /// Nearest sampled best response to x and its distance.
  Response best_response(const Point& x) const;
  /// Re-evaluates every player's objective at `response` against the sampled
  /// optimum for x.
  bool is_sampled_best_response(const Point& x, const Point& response) const;

  const GameSpec& game() const noexcept { return game_; }
  const ArgoptConfig& config() const noexcept { return cfg_; }

 private:
  std::vector<Box> player_image(std::size_t player, const Box& y) const;
  // Sampled objective values of player i over its grid with x_{-i} fixed.
  std::vector<double> sample(std::size_t player, const Point& x) const;

  GameSpec game_;
  ArgoptConfig cfg_;
  std::vector<Expr> objectives_;
  std::vector<std::vector<Point>> grids_;
};

/// F(u, v) = argmin_{u'} phi(u', v) x argmax_{v'} phi(u, v'); phi ranges over
/// the variables "u..." of U followed by those of V.
BestResponseMap saddle_map(const std::string& phi, const Box& u, const Box& v, const ArgoptConfig& cfg);
BestResponseMap nash_map(const GameSpec& game, const ArgoptConfig& cfg);

/// Outer enclosure of the saddle set (saddle mode) or Nash set.
Paving solve_equilibrium(const GameSpec& game, const PaveConfig& pave_cfg, const ArgoptConfig& cfg);

struct CournotPair {
  Point x;
  Point response;
  double residual = 0.0;
};

/// Searches candidate boxes (center, then corners) for x whose sampled best
/// response x' is within delta of x and of the box.
std::optional<CournotPair> cournot_pair_test(const BestResponseMap& map, const Paving& paving,
                                             double delta);

struct MinimaxGap {
  /// max_v min_u phi, within tol.
  double maxmin = 0.0;
  /// min_u max_v phi, within tol.
  double minmax = 0.0;
  Interval maxmin_bounds;
  Interval minmax_bounds;
  bool converged = true;
};

/// Interval branch and bound on both orders of optimization. phi ranges over
/// the variables of U followed by those of V.
MinimaxGap minimax_gap(const Expr& phi, const Box& u, const Box& v, double tol);

/// The game restricted to points_per_dim grid values per coordinate.
struct GridGame {
  std::vector<Point> points;
  /// y in F(x) iff y is a grid best response to x.
  FiniteRelation best_response;
};

GridGame discretize(const GameSpec& game, std::size_t points_per_dim);

}  // namespace fixpave
