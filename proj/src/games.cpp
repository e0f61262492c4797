#include "fixpave/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 14;

// Copy of `box` with components `dims` replaced by `sub`.
Box with_components(const Box& box, const std::vector<std::size_t>& dims, const Box& sub) {
  std::vector<Interval> out = box.dims();
  for (std::size_t k = 0; k < dims.size(); ++k) out[dims[k]] = sub[k];
  return Box(std::move(out));
}

void set_components(Point& x, const std::vector<std::size_t>& dims, const Point& sub) {
  for (std::size_t k = 0; k < dims.size(); ++k) {
    x[static_cast<Eigen::Index>(dims[k])] = sub[static_cast<Eigen::Index>(k)];
  }
}

Point components(const Point& x, const std::vector<std::size_t>& dims) {
  Point out(static_cast<Eigen::Index>(dims.size()));
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = x[static_cast<Eigen::Index>(dims[k])];
  }
  return out;
}

// `per_dim` evenly spaced values per coordinate, first coordinate fastest.
std::vector<Point> grid(const Box& box, std::size_t per_dim) {
  const std::size_t n = box.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_dim;
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    Point p(static_cast<Eigen::Index>(n));
    std::size_t rest = k;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rest % per_dim;
      rest /= per_dim;
      const auto& c = box[i];
      p[static_cast<Eigen::Index>(i)] =
          per_dim == 1 ? c.mid()
                       : c.lo() + (c.hi() - c.lo()) * static_cast<double>(j) / static_cast<double>(per_dim - 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t residual_grid_size(const Box& box, double tol) {
  std::size_t per_dim = static_cast<std::size_t>(std::ceil(box.diameter() / tol)) + 1;
  per_dim = std::max<std::size_t>(per_dim, 2);
  const double cap = std::pow(static_cast<double>(kMaxGridPoints), 1.0 / static_cast<double>(box.size()));
  return std::min<std::size_t>(per_dim, std::max<std::size_t>(2, static_cast<std::size_t>(cap)));
}

// Sampled values within this of the sampled optimum count as optimal.
double tie_slack(double best) { return 1e-12 * std::max(1.0, std::abs(best)); }

// Merge 1-D boxes that touch; fall back to the hull when too many remain.
std::vector<Box> coarsen(std::vector<Box> boxes, std::size_t limit) {
  if (boxes.size() <= 1) return boxes;
  if (boxes.front().size() == 1) {
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a[0].lo() < b[0].lo(); });
    std::vector<Box> merged{boxes.front()};
    for (std::size_t i = 1; i < boxes.size(); ++i) {
      if (boxes[i][0].lo() <= merged.back()[0].hi()) {
        merged.back() = hull(merged.back(), boxes[i]);
      } else {
        merged.push_back(boxes[i]);
      }
    }
    boxes = std::move(merged);
  }
  if (boxes.size() <= limit) return boxes;
  Box h = boxes.front();
  for (const auto& b : boxes) h = hull(h, b);
  return {h};
}

std::vector<std::string> player_vars(const Player& p) {
  if (!p.vars.empty()) {
    if (p.vars.size() != p.box.size()) {
      throw InvalidGame("player '" + p.name + "' declares " + std::to_string(p.vars.size()) +
                        " variables for a " + std::to_string(p.box.size()) + "-D box");
    }
    return p.vars;
  }
  if (p.box.size() == 1) return {p.name};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.box.size(); ++i) out.push_back(p.name + "_" + std::to_string(i + 1));
  return out;
}

Box product_domain(const std::vector<Player>& players) {
  if (players.empty()) throw InvalidGame("a game needs at least one player");
  Box d = players.front().box;
  for (std::size_t i = 1; i < players.size(); ++i) d = concat(d, players[i].box);
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// GameSpec

GameSpec::GameSpec(GameMode mode, std::vector<Player> players, const std::vector<std::string>& payoffs)
    : mode_(mode), players_(std::move(players)), domain_(product_domain(players_)) {
  for (const auto& p : players_) {
    std::vector<std::size_t> dims;
    for (const auto& v : player_vars(p)) {
      if (std::find(variables_.begin(), variables_.end(), v) != variables_.end()) {
        throw InvalidGame("variable '" + v + "' declared twice");
      }
      dims.push_back(variables_.size());
      variables_.push_back(v);
    }
    dims_.push_back(std::move(dims));
  }
  if (mode_ == GameMode::Saddle && (players_.size() != 2 || payoffs.size() != 1)) {
    throw InvalidGame("saddle mode needs exactly two players and one payoff");
  }
  if (mode_ == GameMode::Nash && payoffs.size() != players_.size()) {
    throw InvalidGame("nash mode needs one payoff per player");
  }
  for (const auto& text : payoffs) payoffs_.push_back(parse_expr(text, variables_));
}

Expr GameSpec::objective(std::size_t player) const {
  if (player >= players_.size()) throw std::out_of_range("no such player");
  if (mode_ == GameMode::Saddle) {
    return player == 0 ? payoffs_[0] : Expr::unary(Expr::Op::Neg, payoffs_[0]);
  }
  return Expr::unary(Expr::Op::Neg, payoffs_[player]);
}

GameSpec game_from_json(const Json& j, const std::string& pointer, const JsonDocument* doc) {
  if (!j.is_object()) throw SchemaError(pointer, "expected a game object");
  const std::string mode_ptr = child_pointer(pointer, "mode");
  if (!j.contains("mode") || !j["mode"].is_string()) throw SchemaError(mode_ptr, "expected \"saddle\" or \"nash\"");
  const std::string mode_text = j["mode"].get<std::string>();
  GameMode mode;
  if (mode_text == "saddle") {
    mode = GameMode::Saddle;
  } else if (mode_text == "nash") {
    mode = GameMode::Nash;
  } else {
    throw SchemaError(mode_ptr, "expected \"saddle\" or \"nash\"");
  }

  const std::string players_ptr = child_pointer(pointer, "players");
  if (!j.contains("players") || !j["players"].is_array() || j["players"].empty()) {
    throw SchemaError(players_ptr, "expected a non-empty array of players");
  }
  std::vector<Player> players;
  for (std::size_t i = 0; i < j["players"].size(); ++i) {
    const std::string ptr = child_pointer(players_ptr, i);
    const Json& p = j["players"][i];
    if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) {
      throw SchemaError(ptr, "expected {name, box}");
    }
    if (!p.contains("box")) throw SchemaError(ptr, "missing field 'box'");
    Player player{p["name"].get<std::string>(), box_from_json(p["box"], child_pointer(ptr, "box"), doc), {}};
    if (p.contains("vars")) {
      const std::string vars_ptr = child_pointer(ptr, "vars");
      if (!p["vars"].is_array()) throw SchemaError(vars_ptr, "expected an array of names");
      for (std::size_t k = 0; k < p["vars"].size(); ++k) {
        if (!p["vars"][k].is_string()) throw SchemaError(child_pointer(vars_ptr, k), "expected a name");
        player.vars.push_back(p["vars"][k].get<std::string>());
      }
    }
    players.push_back(std::move(player));
  }

  std::vector<std::string> payoffs;
  std::string payoffs_ptr;
  if (j.contains("payoff")) {
    payoffs_ptr = child_pointer(pointer, "payoff");
    if (!j["payoff"].is_string()) throw SchemaError(payoffs_ptr, "expected an expression string");
    payoffs.push_back(j["payoff"].get<std::string>());
  } else if (j.contains("payoffs")) {
    payoffs_ptr = child_pointer(pointer, "payoffs");
    if (!j["payoffs"].is_array()) throw SchemaError(payoffs_ptr, "expected an array of expressions");
    for (std::size_t i = 0; i < j["payoffs"].size(); ++i) {
      if (!j["payoffs"][i].is_string()) throw SchemaError(child_pointer(payoffs_ptr, i), "expected an expression");
      payoffs.push_back(j["payoffs"][i].get<std::string>());
    }
  } else {
    throw SchemaError(pointer, "missing field 'payoff' or 'payoffs'");
  }

  try {
    return GameSpec(mode, std::move(players), payoffs);
  } catch (const InvalidGame& e) {
    throw SchemaError(pointer, e.what());
  } catch (const InvalidInterval& e) {
    throw SchemaError(players_ptr, e.what());
  } catch (const Error& e) {
    throw SchemaError(payoffs_ptr, e.what());
  }
}

// ---------------------------------------------------------------------------
// Argmin enclosures

void ArgoptConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("argopt depth must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("argopt tol must be positive");
}

namespace {

// One parameter-uniform pass: B is dropped when lb(e on B x P) exceeds the
// least ub(e on B' x P).
std::vector<Box> argmin_uniform(const Expr& e, const Box& box, const std::vector<std::size_t>& opt_dims,
                                const ArgoptConfig& cfg) {
  struct Bounded {
    Box sub;
    Interval range;
  };
  auto bound = [&](Box sub) {
    Interval r = eval_interval(e, with_components(box, opt_dims, sub));
    return Bounded{std::move(sub), r};
  };

  std::vector<Bounded> live{bound(select(box, opt_dims))};
  for (unsigned level = 0;; ++level) {
    double best_upper = std::numeric_limits<double>::infinity();
    for (const auto& b : live) best_upper = std::min(best_upper, b.range.hi());
    std::erase_if(live, [&](const Bounded& b) { return b.range.lo() > best_upper; });
    if (level == cfg.depth) break;

    std::vector<Bounded> next;
    next.reserve(2 * live.size());
    for (auto& b : live) {
      if (b.sub.diameter() == 0.0) {
        next.push_back(std::move(b));
        continue;
      }
      auto [left, right] = bisect(b.sub);
      next.push_back(bound(std::move(left)));
      next.push_back(bound(std::move(right)));
    }
    live = std::move(next);
  }

  std::vector<Box> out;
  out.reserve(live.size());
  for (auto& b : live) out.push_back(std::move(b.sub));
  return out;
}

bool box_less(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].lo() != b[k].lo()) return a[k].lo() < b[k].lo();
    if (a[k].hi() != b[k].hi()) return a[k].hi() < b[k].hi();
  }
  return false;
}

}  // namespace

std::vector<Box> argmin_enclosure(const Expr& e, const Box& box, const std::vector<std::size_t>& opt_dims,
                                  const ArgoptConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> param_dims;
  for (std::size_t k = 0; k < box.size(); ++k) {
    if (std::find(opt_dims.begin(), opt_dims.end(), k) == opt_dims.end()) param_dims.push_back(k);
  }
  if (param_dims.empty()) return argmin_uniform(e, box, opt_dims, cfg);

  // A wide parameter box inflates every bound by the parameter terms alone,
  // so split it down to the final optimization resolution (within a cap) and
  // take the union of the per-piece enclosures.
  const double resolution = std::ldexp(select(box, opt_dims).diameter(), -static_cast<int>(cfg.depth));
  std::vector<Box> pieces{select(box, param_dims)};
  while (2 * pieces.size() <= kMaxParamPieces) {
    bool split = false;
    std::vector<Box> next;
    for (auto& p : pieces) {
      if (p.diameter() > resolution) {
        auto [a, b] = bisect(p);
        next.push_back(std::move(a));
        next.push_back(std::move(b));
        split = true;
      } else {
        next.push_back(std::move(p));
      }
    }
    pieces = std::move(next);
    if (!split) break;
  }

  std::vector<Box> out;
  for (const auto& p : pieces) {
    auto part = argmin_uniform(e, with_components(box, param_dims, p), opt_dims, cfg);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::sort(out.begin(), out.end(), box_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Box> argmax_enclosure(const Expr& e, const Box& box, const std::vector<std::size_t>& opt_dims,
                                  const ArgoptConfig& cfg) {
  return argmin_enclosure(Expr::unary(Expr::Op::Neg, e), box, opt_dims, cfg);
}

// ---------------------------------------------------------------------------
// Best-response maps

BestResponseMap::BestResponseMap(GameSpec game, ArgoptConfig cfg) : game_(std::move(game)), cfg_(cfg) {
  cfg_.validate();
  for (std::size_t i = 0; i < game_.players().size(); ++i) {
    objectives_.push_back(game_.objective(i));
    const Box& own = game_.players()[i].box;
    grids_.push_back(grid(own, residual_grid_size(own, cfg_.tol)));
  }
}

std::vector<Box> BestResponseMap::player_image(std::size_t player, const Box& y) const {
  const auto& dims = game_.dims(player);
  const Box query = with_components(y, dims, game_.players()[player].box);
  return coarsen(argmin_enclosure(objectives_[player], query, dims, cfg_), kMaxPlayerBoxes);
}

std::vector<Box> BestResponseMap::image(const Box& y) const {
  if (y.size() != domain().size()) throw DimensionMismatch(domain().size(), y.size());
  std::vector<Box> out{y};
  for (std::size_t i = 0; i < game_.players().size(); ++i) {
    const auto responses = player_image(i, y);
    std::vector<Box> next;
    next.reserve(out.size() * responses.size());
    for (const auto& partial : out) {
      for (const auto& r : responses) next.push_back(with_components(partial, game_.dims(i), r));
    }
    out = std::move(next);
  }
  return out;
}

std::vector<double> BestResponseMap::sample(std::size_t player, const Point& x) const {
  const auto& dims = game_.dims(player);
  Point y = x;
  std::vector<double> values;
  values.reserve(grids_[player].size());
  for (const auto& g : grids_[player]) {
    set_components(y, dims, g);
    values.push_back(eval_point(objectives_[player], y));
  }
  return values;
}

BestResponseMap::Response BestResponseMap::best_response(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != domain().size()) {
    throw DimensionMismatch(domain().size(), static_cast<std::size_t>(x.size()));
  }
  Response r{x, 0.0};
  for (std::size_t i = 0; i < game_.players().size(); ++i) {
    const auto& dims = game_.dims(i);
    const auto values = sample(i, x);
    const double best = *std::min_element(values.begin(), values.end());
    const Point own = components(x, dims);
    double nearest = std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] > best + tie_slack(best)) continue;
      const double d = chebyshev_distance(own, grids_[i][k]);
      if (d < nearest) {
        nearest = d;
        pick = k;
      }
    }
    set_components(r.point, dims, grids_[i][pick]);
    r.distance = std::max(r.distance, nearest);
  }
  return r;
}

double BestResponseMap::residual(const Point& x) const { return best_response(x).distance; }

bool BestResponseMap::is_sampled_best_response(const Point& x, const Point& response) const {
  for (std::size_t i = 0; i < game_.players().size(); ++i) {
    const auto& dims = game_.dims(i);
    const auto values = sample(i, x);
    const double best = *std::min_element(values.begin(), values.end());
    Point y = x;
    set_components(y, dims, components(response, dims));
    if (eval_point(objectives_[i], y) > best + tie_slack(best)) return false;
  }
  return true;
}

BestResponseMap saddle_map(const std::string& phi, const Box& u, const Box& v, const ArgoptConfig& cfg) {
  std::vector<Player> players{{"u", u, {}}, {"v", v, {}}};
  return BestResponseMap(GameSpec(GameMode::Saddle, std::move(players), {phi}), cfg);
}

BestResponseMap nash_map(const GameSpec& game, const ArgoptConfig& cfg) {
  if (game.mode() != GameMode::Nash) throw InvalidGame("nash_map needs a game in nash mode");
  return BestResponseMap(game, cfg);
}

Paving solve_equilibrium(const GameSpec& game, const PaveConfig& pave_cfg, const ArgoptConfig& cfg) {
  const BestResponseMap map(game, cfg);
  return enclose_fixed_points(map, game.domain(), pave_cfg);
}

std::optional<CournotPair> cournot_pair_test(const BestResponseMap& map, const Paving& paving, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  auto try_point = [&](const Point& x, const Box& box) -> std::optional<CournotPair> {
    auto r = map.best_response(x);
    if (r.distance > delta) return std::nullopt;
    if (chebyshev_distance(r.point, box) > delta) return std::nullopt;
    if (!map.is_sampled_best_response(x, r.point)) return std::nullopt;
    return CournotPair{x, std::move(r.point), r.distance};
  };
  for (const auto& box : paving.candidates) {
    if (auto found = try_point(box.midpoint(), box)) return found;
    if (box.size() > 16) continue;
    for (const auto& c : corners(box)) {
      if (auto found = try_point(c, box)) return found;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grid games

GridGame discretize(const GameSpec& game, std::size_t points_per_dim) {
  if (points_per_dim < 1) throw std::invalid_argument("points_per_dim must be positive");
  const std::size_t players = game.players().size();
  std::vector<std::vector<Point>> own(players);
  std::vector<std::size_t> radix(players);
  for (std::size_t i = 0; i < players; ++i) {
    own[i] = grid(game.players()[i].box, points_per_dim);
    radix[i] = own[i].size();
  }

  // Grid point index: player 0's choice fastest.
  std::size_t total = 1;
  for (std::size_t r : radix) total *= r;
  auto choices_of = [&](std::size_t index) {
    std::vector<std::size_t> c(players);
    for (std::size_t i = 0; i < players; ++i) {
      c[i] = index % radix[i];
      index /= radix[i];
    }
    return c;
  };
  auto index_of = [&](const std::vector<std::size_t>& c) {
    std::size_t index = 0;
    for (std::size_t i = players; i-- > 0;) index = index * radix[i] + c[i];
    return index;
  };

  GridGame g{{}, FiniteRelation(std::vector<LabelSet>{})};
  g.points.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    const auto c = choices_of(k);
    Point x(static_cast<Eigen::Index>(game.domain().size()));
    for (std::size_t i = 0; i < players; ++i) set_components(x, game.dims(i), own[i][c[i]]);
    g.points.push_back(std::move(x));
  }

  std::vector<LabelSet> images(total, LabelSet(total));
  for (std::size_t k = 0; k < total; ++k) {
    const auto c = choices_of(k);
    std::vector<std::vector<std::size_t>> best(players);
    for (std::size_t i = 0; i < players; ++i) {
      const Expr obj = game.objective(i);
      std::vector<double> values(radix[i]);
      for (std::size_t j = 0; j < radix[i]; ++j) {
        auto alt = c;
        alt[i] = j;
        values[j] = eval_point(obj, g.points[index_of(alt)]);
      }
      const double m = *std::min_element(values.begin(), values.end());
      for (std::size_t j = 0; j < radix[i]; ++j) {
        if (values[j] == m) best[i].push_back(j);
      }
    }
    // Product of the per-player best sets.
    std::vector<std::size_t> pick(players, 0);
    for (;;) {
      std::vector<std::size_t> target(players);
      for (std::size_t i = 0; i < players; ++i) target[i] = best[i][pick[i]];
      images[k].set(index_of(target));
      std::size_t i = 0;
      while (i < players && ++pick[i] == best[i].size()) pick[i++] = 0;
      if (i == players) break;
    }
  }
  g.best_response = FiniteRelation(std::move(images));
  return g;
}

}  // namespace fixpave
