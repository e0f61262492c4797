#include "fixpave/poset.hpp"

#include <algorithm>
#include <set>

#include "fixpave/errors.hpp"

namespace fixpave {

namespace {

void check_map(const FinitePoset& p, const ElementMap& f) {
  if (f.size() != p.size()) throw InvalidPoset("map must assign an image to every element");
  for (std::size_t y : f) {
    if (y >= p.size()) throw InvalidPoset("map image outside the poset");
  }
}

std::vector<std::size_t> members(std::size_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1U) out.push_back(i);
  }
  return out;
}

// Ascending chain from x; throws when it does not settle within |P| steps.
std::size_t stabilize(const FinitePoset& p, const ElementMap& f, std::size_t x) {
  for (std::size_t step = 0; step <= p.size(); ++step) {
    const std::size_t y = f[x];
    if (y == x) return x;
    x = y;
  }
  throw NonStabilizing("iteration from '" + p.label(x) + "' did not stabilize");
}

}  // namespace

FinitePoset::FinitePoset(std::vector<std::string> labels,
                         const std::vector<std::pair<std::size_t, std::size_t>>& leq_pairs,
                         std::optional<std::size_t> bottom)
    : labels_(std::move(labels)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n == 0) throw InvalidPoset("poset needs at least one element");
  order_ = Order::Identity(n, n);
  for (const auto& [a, b] : leq_pairs) {
    if (a >= labels_.size() || b >= labels_.size()) throw InvalidPoset("order pair refers to an unknown element");
    order_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = true;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!order_(i, k)) continue;
      for (Eigen::Index j = 0; j < n; ++j) order_(i, j) = order_(i, j) || order_(k, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (order_(i, j) && order_(j, i)) {
        throw InvalidPoset("order is not antisymmetric: '" + labels_[static_cast<std::size_t>(i)] +
                           "' and '" + labels_[static_cast<std::size_t>(j)] + "'");
      }
    }
  }
  finish(bottom);
}

FinitePoset::FinitePoset(std::vector<std::string> labels, Order order)
    : labels_(std::move(labels)), order_(std::move(order)) {
  finish(std::nullopt);
}

void FinitePoset::finish(std::optional<std::size_t> bottom) {
  const std::size_t n = size();
  std::optional<std::size_t> least;
  for (std::size_t i = 0; i < n && !least; ++i) {
    bool below_all = true;
    for (std::size_t j = 0; j < n && below_all; ++j) below_all = leq(i, j);
    if (below_all) least = i;
  }
  if (!least) throw InvalidPoset("poset has no least element");
  if (bottom && *bottom != *least) throw InvalidPoset("'" + label(*bottom) + "' is not the least element");
  bottom_ = *least;

  verified_ = n <= kExhaustiveLimit;
  if (!verified_) return;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    const auto d = members(mask, n);
    if (is_directed(d) && !sup(d)) throw InvalidPoset("a directed subset has no supremum");
  }
}

FinitePoset FinitePoset::powerset(std::size_t n) {
  if (n > 20) throw InvalidPoset("powerset too large");
  const std::size_t count = std::size_t{1} << n;
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::string s = "{";
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) {
        if (s.size() > 1) s += ',';
        s += std::to_string(i + 1);
      }
    }
    labels.push_back(s + "}");
  }
  const auto m = static_cast<Eigen::Index>(count);
  Order order(m, m);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      order(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (a & ~b) == 0;
    }
  }
  return FinitePoset(std::move(labels), std::move(order));
}

std::size_t FinitePoset::index_of(const std::string& l) const {
  const auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end()) throw InvalidPoset("unknown element '" + l + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::optional<std::size_t> FinitePoset::sup(const std::vector<std::size_t>& elements) const {
  std::vector<std::size_t> upper;
  for (std::size_t u = 0; u < size(); ++u) {
    if (std::all_of(elements.begin(), elements.end(), [&](std::size_t e) { return leq(e, u); })) {
      upper.push_back(u);
    }
  }
  for (std::size_t u : upper) {
    if (std::all_of(upper.begin(), upper.end(), [&](std::size_t v) { return leq(u, v); })) return u;
  }
  return std::nullopt;
}

bool FinitePoset::is_directed(const std::vector<std::size_t>& elements) const {
  if (elements.empty()) return false;
  for (std::size_t a : elements) {
    for (std::size_t b : elements) {
      const bool bounded = std::any_of(elements.begin(), elements.end(),
                                       [&](std::size_t c) { return leq(a, c) && leq(b, c); });
      if (!bounded) return false;
    }
  }
  return true;
}

std::optional<ContinuityViolation> check_scott_continuity(const FinitePoset& p, const ElementMap& f,
                                                          bool monotone_only) {
  check_map(p, f);
  const std::size_t n = p.size();
  if (!monotone_only && n > FinitePoset::kExhaustiveLimit) {
    throw PosetTooLarge(n, FinitePoset::kExhaustiveLimit);
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (p.leq(x, y) && !p.leq(f[x], f[y])) {
        return ContinuityViolation{ContinuityViolation::Kind::NotMonotone, {x, y}};
      }
    }
  }
  if (monotone_only) return std::nullopt;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    const auto d = members(mask, n);
    if (!p.is_directed(d)) continue;
    std::vector<std::size_t> image;
    for (std::size_t x : d) image.push_back(f[x]);
    const auto sup_d = p.sup(d);
    const auto sup_image = p.sup(image);
    if (!sup_d || !sup_image || *sup_image != f[*sup_d]) {
      return ContinuityViolation{ContinuityViolation::Kind::SupNotPreserved, d};
    }
  }
  return std::nullopt;
}

std::size_t kleene_lfp(const FinitePoset& p, const ElementMap& f) {
  check_map(p, f);
  return stabilize(p, f, p.bottom());
}

std::vector<std::size_t> fixpoints_via_prefixed(const FinitePoset& p, const ElementMap& f) {
  check_map(p, f);
  std::set<std::size_t> out;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.leq(x, f[x])) out.insert(stabilize(p, f, x));
  }
  return {out.begin(), out.end()};
}

std::vector<std::size_t> brute_force_fixpoints(const ElementMap& f) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] == x) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const Json& require(const Json& j, const std::string& pointer, const char* key) {
  if (!j.contains(key)) throw SchemaError(pointer, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t read_index(const Json& j, const std::string& pointer) {
  if (!j.is_number_unsigned()) throw SchemaError(pointer, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string read_label(const Json& j, const std::string& pointer) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw SchemaError(pointer, "expected an element label");
}

PosetProblem powerset_problem(const Json& j, const std::string& pointer) {
  const std::string n_ptr = child_pointer(pointer, "powerset_of");
  const std::size_t n = read_index(require(j, pointer, "powerset_of"), n_ptr);
  if (n == 0 || n > 16) throw SchemaError(n_ptr, "powerset size must be in 1..16");
  FinitePoset poset = FinitePoset::powerset(n);

  const std::string map_ptr = child_pointer(pointer, "map");
  const Json& kind = require(j, pointer, "map");
  if (kind != "reachability") throw SchemaError(map_ptr, "only \"reachability\" is supported");

  auto read_member = [n](const Json& v, const std::string& ptr) {
    const std::size_t e = read_index(v, ptr);
    if (e < 1 || e > n) throw SchemaError(ptr, "element must be in 1.." + std::to_string(n));
    return e - 1;
  };
  std::size_t seeds = 0;
  if (j.contains("seeds")) {
    const std::string ptr = child_pointer(pointer, "seeds");
    if (!j["seeds"].is_array()) throw SchemaError(ptr, "expected an array");
    for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
      seeds |= std::size_t{1} << read_member(j["seeds"][i], child_pointer(ptr, i));
    }
  }
  std::vector<std::size_t> succ(n, 0);
  if (j.contains("edges")) {
    const std::string ptr = child_pointer(pointer, "edges");
    if (!j["edges"].is_array()) throw SchemaError(ptr, "expected an array");
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
      const std::string e_ptr = child_pointer(ptr, i);
      const Json& e = j["edges"][i];
      if (!e.is_array() || e.size() != 2) throw SchemaError(e_ptr, "expected [from, to]");
      const std::size_t from = read_member(e[0], child_pointer(e_ptr, std::size_t{0}));
      const std::size_t to = read_member(e[1], child_pointer(e_ptr, std::size_t{1}));
      succ[from] |= std::size_t{1} << to;
    }
  }
  ElementMap f(poset.size());
  for (std::size_t s = 0; s < poset.size(); ++s) {
    std::size_t image = seeds;
    for (std::size_t i = 0; i < n; ++i) {
      if ((s >> i) & 1U) image |= succ[i];
    }
    f[s] = image;
  }
  return {std::move(poset), std::move(f)};
}

}  // namespace

PosetProblem poset_problem_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw SchemaError(pointer, "expected an object");
  if (j.contains("powerset_of")) return powerset_problem(j, pointer);

  const std::string el_ptr = child_pointer(pointer, "elements");
  const Json& elements = require(j, pointer, "elements");
  if (!elements.is_array() || elements.empty()) throw SchemaError(el_ptr, "expected a non-empty array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    labels.push_back(read_label(elements[i], child_pointer(el_ptr, i)));
  }
  auto index = [&labels](const std::string& l, const std::string& ptr) {
    const auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw SchemaError(ptr, "unknown element '" + l + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (j.contains("leq_pairs")) {
    const std::string ptr = child_pointer(pointer, "leq_pairs");
    if (!j["leq_pairs"].is_array()) throw SchemaError(ptr, "expected an array");
    for (std::size_t i = 0; i < j["leq_pairs"].size(); ++i) {
      const std::string p_ptr = child_pointer(ptr, i);
      const Json& p = j["leq_pairs"][i];
      if (!p.is_array() || p.size() != 2) throw SchemaError(p_ptr, "expected [a, b]");
      pairs.emplace_back(index(read_label(p[0], child_pointer(p_ptr, std::size_t{0})), p_ptr),
                         index(read_label(p[1], child_pointer(p_ptr, std::size_t{1})), p_ptr));
    }
  }
  std::optional<std::size_t> bottom;
  if (j.contains("bottom")) {
    const std::string ptr = child_pointer(pointer, "bottom");
    bottom = index(read_label(j["bottom"], ptr), ptr);
  }

  const std::string map_ptr = child_pointer(pointer, "map");
  const Json& map = require(j, pointer, "map");
  if (!map.is_object()) throw SchemaError(map_ptr, "expected an object {element: image}");
  ElementMap f(labels.size(), labels.size());
  for (const auto& [key, value] : map.items()) {
    const std::string ptr = child_pointer(map_ptr, key);
    f[index(key, ptr)] = index(read_label(value, ptr), ptr);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == labels.size()) throw SchemaError(map_ptr, "no image given for '" + labels[i] + "'");
  }

  try {
    return {FinitePoset(std::move(labels), pairs, bottom), std::move(f)};
  } catch (const InvalidPoset& e) {
    throw SchemaError(pointer, e.what());
  }
}

}  // namespace fixpave
