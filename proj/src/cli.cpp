#include "fixpave/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fixpave/errors.hpp"
#include "fixpave/games.hpp"
#include "fixpave/iterate.hpp"
#include "fixpave/json_io.hpp"
#include "fixpave/multimap.hpp"
#include "fixpave/pave.hpp"
#include "fixpave/poset.hpp"
#include "fixpave/segment_map.hpp"

namespace fixpave::cli {

namespace {

// Reads typed fields of one JSON object, reporting failures by JSON pointer.
class Fields {
 public:
  Fields(const Json& j, std::string pointer, const JsonDocument& doc)
      : j_(j), pointer_(std::move(pointer)), doc_(doc) {
    if (!j_.is_object()) throw SchemaError(pointer_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& at(const std::string& key) const {
    if (!has(key)) throw SchemaError(pointer_, "missing field '" + key + "'");
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return child_pointer(pointer_, key); }
  const JsonDocument& doc() const { return doc_; }

  std::string string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw SchemaError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::optional<double> number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const Json& v = j_.at(key);
    if (!v.is_number()) throw SchemaError(path(key), "expected a number");
    return v.get<double>();
  }
  std::optional<std::size_t> count(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const Json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw SchemaError(path(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }
  Box box(const std::string& key) const { return box_from_json(at(key), path(key), &doc_); }
  std::vector<std::string> strings(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw SchemaError(path(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw SchemaError(child_pointer(path(key), i), "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw SchemaError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw SchemaError(child_pointer(path(key), i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string pointer_;
  const JsonDocument& doc_;
};

struct Settings {
  PaveConfig pave;
  ArgoptConfig argopt;
  std::optional<double> tol;
  std::optional<double> delta;
  std::size_t max_iter = 10'000;
  std::optional<double> cournot_delta;
  std::string format = "json";
  std::optional<std::string> path;
};

unsigned parse_env_threads(const char* text) {
  unsigned value = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    throw SchemaError("", "FIXPAVE_THREADS must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

Settings resolve_settings(const Fields& spec, const Overrides& flags, const char* env_threads) {
  Settings s;
  if (spec.has("config")) {
    const Fields c(spec.at("config"), spec.path("config"), spec.doc());
    if (auto v = c.number("delta_min")) s.pave.delta_min = *v;
    if (auto v = c.count("max_boxes")) s.pave.max_boxes = *v;
    if (auto v = c.count("max_oracle_calls")) s.pave.max_oracle_calls = *v;
    if (auto v = c.count("threads")) {
      if (*v == 0 || *v > 1024) throw SchemaError(c.path("threads"), "expected 1..1024 threads");
      s.pave.threads = static_cast<unsigned>(*v);
    }
    if (auto v = c.count("depth")) {
      if (*v == 0 || *v > 64) throw SchemaError(c.path("depth"), "expected depth in 1..64");
      s.argopt.depth = static_cast<unsigned>(*v);
    }
    s.tol = c.number("tol");
    s.delta = c.number("delta");
    if (auto v = c.count("max_iter")) s.max_iter = *v;
    s.cournot_delta = c.number("cournot_delta");
    for (const char* key : {"delta_min", "tol", "delta", "cournot_delta"}) {
      if (auto v = c.number(key); v && !(*v > 0.0)) throw SchemaError(c.path(key), "must be positive");
    }
    for (const char* key : {"max_boxes", "max_oracle_calls", "max_iter"}) {
      if (auto v = c.count(key); v && *v == 0) throw SchemaError(c.path(key), "must be positive");
    }
  }
  if (spec.has("output")) {
    const Fields o(spec.at("output"), spec.path("output"), spec.doc());
    if (o.has("path")) s.path = o.string("path");
    if (o.has("format")) s.format = o.string("format");
  }

  if (env_threads != nullptr && *env_threads != '\0') s.pave.threads = parse_env_threads(env_threads);
  if (flags.threads) s.pave.threads = *flags.threads;
  if (flags.delta_min) s.pave.delta_min = *flags.delta_min;
  if (flags.max_boxes) s.pave.max_boxes = *flags.max_boxes;
  if (flags.tol) s.tol = *flags.tol;
  if (flags.output) s.path = *flags.output;
  if (flags.format) s.format = *flags.format;

  try {
    s.pave.validate();
    if (s.tol && !(*s.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  } catch (const std::invalid_argument& e) {
    throw SchemaError(spec.path("config"), e.what());
  }
  if (s.tol) s.argopt.tol = *s.tol;
  if (s.format != "json" && s.format != "csv") {
    throw SchemaError(child_pointer(spec.path("output"), "format"), "expected \"json\" or \"csv\"");
  }
  return s;
}

std::vector<std::string> default_variables(std::size_t n) {
  if (n == 1) return {"x"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

// Parse an expression, reporting failures at `pointer`.
Expr expr_at(const std::string& text, const std::vector<std::string>& vars, const std::string& pointer) {
  try {
    return parse_expr(text, vars);
  } catch (const Error& e) {
    throw SchemaError(pointer, e.what());
  }
}

GameSpec game_at(const Fields& spec, const std::string& key) {
  return game_from_json(spec.at(key), spec.path(key), &spec.doc());
}

std::shared_ptr<const SetValuedMap> map_from_json(const Fields& m, const Settings& s) {
  const std::string name = m.string("name");
  if (name == "segment_example") {
    const std::size_t count = m.count("segments").value_or(std::size_t{1} << 16);
    if (count == 0 || count > (std::size_t{1} << 24)) {
      throw SchemaError(m.path("segments"), "expected 1..2^24 segments");
    }
    return std::make_shared<SegmentMap>(SegmentMap::harmonic(count));
  }
  if (name == "pointmap") {
    const Box domain = m.box("domain");
    const auto vars = m.has("variables") ? m.strings("variables") : default_variables(domain.size());
    if (vars.size() != domain.size()) throw SchemaError(m.path("variables"), "expected one name per domain dimension");
    const auto texts = m.strings("components");
    if (texts.size() != domain.size()) throw SchemaError(m.path("components"), "expected one expression per domain dimension");
    std::vector<Expr> components;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      components.push_back(expr_at(texts[i], vars, child_pointer(m.path("components"), i)));
    }
    std::optional<Box> support;
    if (m.has("support")) {
      support = m.box("support");
      if (support->size() != domain.size()) throw SchemaError(m.path("support"), "dimension differs from domain");
    }
    return std::make_shared<PointMap>(domain, std::move(components), support);
  }
  if (name == "saddle_map") {
    const Box u = m.box("U");
    const Box v = m.box("V");
    const std::string phi = m.string("payoff");
    try {
      return std::make_shared<BestResponseMap>(saddle_map(phi, u, v, s.argopt));
    } catch (const Error& e) {
      throw SchemaError(m.path("payoff"), e.what());
    }
  }
  if (name == "nash_map") {
    GameSpec game = game_at(m, "game");
    if (game.mode() != GameMode::Nash) throw SchemaError(child_pointer(m.path("game"), "mode"), "expected \"nash\"");
    return std::make_shared<BestResponseMap>(nash_map(game, s.argopt));
  }
  throw SchemaError(m.path("name"), "unknown map '" + name + "'");
}

Json point_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

struct Result {
  Json json;
  std::optional<Paving> paving;
  std::size_t dimension = 0;
  bool complete = true;
};

using Task = std::function<Result()>;

Result paving_result(const std::string& kind, Paving p, std::size_t dim) {
  Result r;
  r.json = {{"kind", kind}, {"paving", to_json(p)}, {"oracle_calls", p.stats.oracle_calls}};
  r.complete = p.complete;
  r.dimension = dim;
  r.paving = std::move(p);
  return r;
}

Box domain_for(const Fields& spec, const SetValuedMap& map) {
  if (!spec.has("domain")) return map.domain();
  const Box d = spec.box("domain");
  if (d.size() != map.domain().size() || !map.domain().contains(d)) {
    throw SchemaError(spec.path("domain"), "must lie inside the map's domain");
  }
  return d;
}

Task prepare(const Fields& spec, const Settings& s) {
  const std::string kind = spec.string("kind");

  if (kind == "pave" || kind == "certify_empty" || kind == "approx") {
    const auto map = map_from_json(Fields(spec.at("map"), spec.path("map"), spec.doc()), s);
    const Box domain = domain_for(spec, *map);
    const double delta = s.delta.value_or(s.tol.value_or(s.pave.delta_min));
    return [=] {
      if (kind == "certify_empty") {
        auto e = certify_empty(*map, domain, s.pave);
        const bool certified = e.certified_empty;
        Result r = paving_result(kind, std::move(e.paving), domain.size());
        r.json["status"] = certified ? "EmptyCertified" : "CandidatesRemain";
        return r;
      }
      Result r = paving_result(kind, enclose_fixed_points(*map, domain, s.pave), domain.size());
      if (kind == "approx") {
        r.json["delta"] = delta;
        const auto found = approx_fixed_point(*map, *r.paving, delta);
        r.json["found"] = found.has_value();
        if (found) {
          r.json["point"] = point_json(found->point);
          r.json["residual"] = found->residual;
        }
      }
      return r;
    };
  }

  if (kind == "iterate") {
    const auto texts = spec.strings("components");
    const auto x0_values = spec.numbers("x0");
    if (texts.size() != x0_values.size() || texts.empty()) {
      throw SchemaError(spec.path("components"), "expected one expression per coordinate of x0");
    }
    const auto vars = spec.has("variables") ? spec.strings("variables") : default_variables(texts.size());
    if (vars.size() != texts.size()) throw SchemaError(spec.path("variables"), "expected one name per coordinate");
    std::vector<Expr> f;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      f.push_back(expr_at(texts[i], vars, child_pointer(spec.path("components"), i)));
    }
    const Point x0 = Eigen::Map<const Point>(x0_values.data(), static_cast<Eigen::Index>(x0_values.size()));
    const double tol = s.tol.value_or(1e-6);
    return [=] {
      const IterResult it = iterate_to_limit(f, x0, tol, s.max_iter);
      Result r;
      r.json = {{"kind", kind},
                {"limit", point_json(it.limit)},
                {"iterations", it.iterations},
                {"residual", it.residual},
                {"converged", it.converged}};
      r.complete = it.converged;
      return r;
    };
  }

  if (kind == "lfp") {
    const auto problem = std::make_shared<PosetProblem>(poset_problem_from_json(spec.at("poset"), spec.path("poset")));
    return [=] {
      const FinitePoset& p = problem->poset;
      const ElementMap& f = problem->map;
      const bool exhaustive = p.size() <= FinitePoset::kExhaustiveLimit;
      const auto violation = check_scott_continuity(p, f, !exhaustive);
      Result r;
      r.json = {{"kind", kind}, {"continuity_checked", exhaustive ? "scott" : "monotone"}};
      if (violation) {
        Json witness = Json::array();
        for (std::size_t x : violation->witness) witness.push_back(p.label(x));
        r.json["continuous"] = false;
        r.json["violation"] = {
            {"kind", violation->kind == ContinuityViolation::Kind::NotMonotone ? "not_monotone" : "sup_not_preserved"},
            {"witness", witness}};
        // Without monotonicity the Kleene chain may not stabilize.
        if (violation->kind == ContinuityViolation::Kind::NotMonotone) return r;
      } else {
        r.json["continuous"] = true;
      }
      r.json["lfp"] = p.label(kleene_lfp(p, f));
      Json fix = Json::array();
      for (std::size_t x : fixpoints_via_prefixed(p, f)) fix.push_back(p.label(x));
      r.json["fixpoints"] = fix;
      return r;
    };
  }

  if (kind == "saddle" || kind == "nash") {
    const GameSpec game = game_at(spec, "game");
    const GameMode want = kind == "saddle" ? GameMode::Saddle : GameMode::Nash;
    if (game.mode() != want) throw SchemaError(child_pointer(spec.path("game"), "mode"), "expected \"" + kind + "\"");
    const auto map = std::make_shared<BestResponseMap>(game, s.argopt);
    return [=] {
      Result r = paving_result(kind, enclose_fixed_points(*map, game.domain(), s.pave), game.domain().size());
      r.json["variables"] = game.variables();
      if (s.cournot_delta) {
        const auto pair = cournot_pair_test(*map, *r.paving, *s.cournot_delta);
        Json c = {{"delta", *s.cournot_delta}, {"found", pair.has_value()}};
        if (pair) {
          c["x"] = point_json(pair->x);
          c["response"] = point_json(pair->response);
          c["residual"] = pair->residual;
        }
        r.json["cournot"] = c;
      }
      return r;
    };
  }

  if (kind == "minimax") {
    const GameSpec game = game_at(spec, "game");
    if (game.mode() != GameMode::Saddle) throw SchemaError(child_pointer(spec.path("game"), "mode"), "expected \"saddle\"");
    const double tol = s.tol.value_or(1e-3);
    return [=] {
      const MinimaxGap g = minimax_gap(game.payoffs()[0], game.players()[0].box, game.players()[1].box, tol);
      Result r;
      r.json = {{"kind", kind},
                {"maxmin", g.maxmin},
                {"minmax", g.minmax},
                {"maxmin_bounds", to_json(g.maxmin_bounds)},
                {"minmax_bounds", to_json(g.minmax_bounds)},
                {"converged", g.converged}};
      r.complete = g.converged;
      return r;
    };
  }

  throw SchemaError(spec.path("kind"), "unknown kind '" + kind + "'");
}

}  // namespace

EffectiveConfig effective_config(std::string_view spec_text, const Overrides& flags, const char* env_threads) {
  const JsonDocument doc = parse_json_document(spec_text);
  const Settings s = resolve_settings(Fields(doc.value, "", doc), flags, env_threads);
  return {s.pave, s.argopt, s.tol, s.format, s.path};
}

Outcome solve(std::string_view spec_text, const Overrides& flags, const char* env_threads) {
  Outcome out;
  Task task;
  Settings settings;
  try {
    const JsonDocument doc = parse_json_document(spec_text);
    const Fields spec(doc.value, "", doc);
    settings = resolve_settings(spec, flags, env_threads);
    task = prepare(spec, settings);
  } catch (const Error& e) {
    out.exit_code = kInvalidSpec;
    out.diagnostics = e.what();
    return out;
  }
  out.path = settings.path;

  Result r;
  try {
    r = task();
  } catch (const std::exception& e) {
    out.exit_code = kFailure;
    out.diagnostics = e.what();
    return out;
  }
  if (settings.format == "csv") {
    if (!r.paving) {
      out.exit_code = kInvalidSpec;
      out.diagnostics = "/output/format: csv output needs a paving result";
      return out;
    }
    out.payload = paving_csv(*r.paving, r.dimension);
  } else {
    out.payload = r.json.dump(2) + "\n";
  }
  if (!r.complete) {
    out.exit_code = kBudgetExceeded;
    out.diagnostics = "budget exceeded; partial result written";
  }
  return out;
}

int run(const std::string& spec_path, const Overrides& flags, std::ostream& out, std::ostream& err) {
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    err << "cannot read spec file '" << spec_path << "'\n";
    return kInvalidSpec;
  }
  std::ostringstream text;
  text << in.rdbuf();

  const Outcome o = solve(text.str(), flags, std::getenv("FIXPAVE_THREADS"));
  if (!o.diagnostics.empty()) err << o.diagnostics << '\n';
  if (o.payload.empty()) return o.exit_code;
  if (o.path) {
    std::ofstream file(*o.path, std::ios::binary | std::ios::trunc);
    file << o.payload;
    if (!file) {
      err << "cannot write result file '" << *o.path << "'\n";
      return kFailure;
    }
  } else {
    out << o.payload;
  }
  return o.exit_code;
}

}  // namespace fixpave::cli
