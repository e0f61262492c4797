#include "fixpave/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "fixpave/errors.hpp"

namespace fixpave {

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  Interval enclosure;
  std::size_t index = 0;
  std::string name;
  unsigned exponent = 0;
  std::vector<Expr> args;
};

Expr Expr::constant(double value) { return constant(value, Interval(value)); }

Expr Expr::constant(double nearest, Interval enclosure) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = nearest;
  n->enclosure = enclosure;
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr::Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
const Interval& Expr::enclosure() const noexcept { return node_->enclosure; }
std::size_t Expr::index() const noexcept { return node_->index; }
const std::string& Expr::name() const noexcept { return node_->name; }
unsigned Expr::exponent() const noexcept { return node_->exponent; }
const std::vector<Expr>& Expr::args() const noexcept { return node_->args; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Expr::Op::Const:
      return a.value() == b.value();
    case Expr::Op::Var:
      return a.index() == b.index() && a.name() == b.name();
    case Expr::Op::Pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  return a.args() == b.args();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Kind { Number, Ident, Punct, End } kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const noexcept { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ == text_.size()) {
      current_ = {Token::Kind::End, {}, start};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      scan_number();
      current_ = {Token::Kind::Number, text_.substr(start, pos_ - start), start};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      current_ = {Token::Kind::Ident, text_.substr(start, pos_ - start), start};
      return;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      ++pos_;
      current_ = {Token::Kind::Punct, text_.substr(start, 1), start};
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
  }

  void scan_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - from;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw SyntaxError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed exponent in number", start);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Kind::End, {}, 0};
};

struct FunctionInfo {
  std::string_view name;
  Expr::Op op;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Expr::Op::Sin, 1}, {"cos", Expr::Op::Cos, 1}, {"exp", Expr::Op::Exp, 1},
    {"abs", Expr::Op::Abs, 1}, {"min", Expr::Op::Min, 2}, {"max", Expr::Op::Max, 2},
};

std::optional<FunctionInfo> find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables)
      : lexer_(text), variables_(variables) {}

  Expr parse() {
    Expr e = parse_sum();
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::End) throw SyntaxError("unexpected '" + std::string(t.text) + "'", t.offset);
    return e;
  }

 private:
  bool at_punct(char c) const {
    const Token& t = lexer_.peek();
    return t.kind == Token::Kind::Punct && t.text[0] == c;
  }

  void expect(char c) {
    const Token& t = lexer_.peek();
    if (!at_punct(c)) {
      throw SyntaxError(std::string("expected '") + c + "'", t.offset);
    }
    lexer_.take();
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    while (at_punct('+') || at_punct('-')) {
      const auto op = lexer_.take().text[0] == '+' ? Expr::Op::Add : Expr::Op::Sub;
      lhs = Expr::binary(op, std::move(lhs), parse_product());
    }
    return lhs;
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    while (at_punct('*') || at_punct('/')) {
      const auto op = lexer_.take().text[0] == '*' ? Expr::Op::Mul : Expr::Op::Div;
      lhs = Expr::binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at_punct('-')) {
      lexer_.take();
      return Expr::unary(Expr::Op::Neg, parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (at_punct('^')) {
      lexer_.take();
      const Token t = lexer_.take();
      if (t.kind != Token::Kind::Number ||
          !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw SyntaxError("exponent must be a nonnegative integer literal", t.offset);
      }
      unsigned n = 0;
      const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc() || n > kMaxExponent) {
        throw SyntaxError("exponent too large", t.offset);
      }
      base = Expr::power(std::move(base), n);
    }
    return base;
  }

  Expr parse_primary() {
    const Token t = lexer_.take();
    switch (t.kind) {
      case Token::Kind::Number:
        return number(t);
      case Token::Kind::Ident:
        return identifier(t);
      case Token::Kind::Punct:
        if (t.text[0] == '(') {
          Expr e = parse_sum();
          expect(')');
          return e;
        }
        throw SyntaxError("unexpected '" + std::string(t.text) + "'", t.offset);
      case Token::Kind::End:
        break;
    }
    throw SyntaxError("unexpected end of input", t.offset);
  }

  Expr number(const Token& t) {
    const std::string text(t.text);
    double nearest = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), nearest);
    try {
      return Expr::constant(nearest, Interval(rounding::decimal_down(text.c_str()),
                                              rounding::decimal_up(text.c_str())));
    } catch (const InvalidInterval&) {
      throw SyntaxError("number out of range", t.offset);
    }
  }

  Expr identifier(const Token& t) {
    if (at_punct('(')) {
      const auto f = find_function(t.text);
      if (!f) throw SyntaxError("unknown function '" + std::string(t.text) + "'", t.offset);
      lexer_.take();
      std::vector<Expr> args;
      if (!at_punct(')')) {
        args.push_back(parse_sum());
        while (at_punct(',')) {
          lexer_.take();
          args.push_back(parse_sum());
        }
      }
      expect(')');
      if (args.size() != f->arity) throw ArityError(std::string(f->name), f->arity, args.size());
      if (f->arity == 1) return Expr::unary(f->op, std::move(args[0]));
      return Expr::binary(f->op, std::move(args[0]), std::move(args[1]));
    }
    const auto it = std::find(variables_.begin(), variables_.end(), t.text);
    if (it == variables_.end()) throw UnknownVariable(std::string(t.text));
    return Expr::variable(static_cast<std::size_t>(it - variables_.begin()), *it);
  }

  static constexpr unsigned kMaxExponent = 1024;

  Lexer lexer_;
  const std::vector<std::string>& variables_;
};

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

const char* function_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Abs: return "abs";
    case Expr::Op::Sin: return "sin";
    case Expr::Op::Cos: return "cos";
    case Expr::Op::Exp: return "exp";
    case Expr::Op::Min: return "min";
    case Expr::Op::Max: return "max";
    default: return "";
  }
}

char operator_symbol(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add: return '+';
    case Expr::Op::Sub: return '-';
    case Expr::Op::Mul: return '*';
    default: return '/';
  }
}

double finite_or_throw(double x) {
  if (!std::isfinite(x)) throw EvaluationError("non-finite value during evaluation");
  return x;
}

// Lookup maps a variable node to its binding.
template <typename Lookup>
double eval_point_impl(const Expr& e, const Lookup& lookup) {
  const auto& a = e.args();
  switch (e.op()) {
    case Expr::Op::Const: return e.value();
    case Expr::Op::Var: return lookup(e);
    case Expr::Op::Neg: return -eval_point_impl(a[0], lookup);
    case Expr::Op::Abs: return std::abs(eval_point_impl(a[0], lookup));
    case Expr::Op::Sin: return std::sin(eval_point_impl(a[0], lookup));
    case Expr::Op::Cos: return std::cos(eval_point_impl(a[0], lookup));
    case Expr::Op::Exp: return finite_or_throw(std::exp(eval_point_impl(a[0], lookup)));
    case Expr::Op::Add: return finite_or_throw(eval_point_impl(a[0], lookup) + eval_point_impl(a[1], lookup));
    case Expr::Op::Sub: return finite_or_throw(eval_point_impl(a[0], lookup) - eval_point_impl(a[1], lookup));
    case Expr::Op::Mul: return finite_or_throw(eval_point_impl(a[0], lookup) * eval_point_impl(a[1], lookup));
    case Expr::Op::Div: {
      const double num = eval_point_impl(a[0], lookup);
      const double den = eval_point_impl(a[1], lookup);
      if (den == 0.0) throw DivisionByZero();
      return finite_or_throw(num / den);
    }
    case Expr::Op::Pow: {
      const double base = eval_point_impl(a[0], lookup);
      double r = 1.0;
      for (unsigned i = 0; i < e.exponent(); ++i) r *= base;
      return finite_or_throw(r);
    }
    case Expr::Op::Min: return std::min(eval_point_impl(a[0], lookup), eval_point_impl(a[1], lookup));
    case Expr::Op::Max: return std::max(eval_point_impl(a[0], lookup), eval_point_impl(a[1], lookup));
  }
  return 0.0;
}

template <typename Lookup>
Interval eval_interval_impl(const Expr& e, const Lookup& lookup) {
  const auto& a = e.args();
  switch (e.op()) {
    case Expr::Op::Const: return e.enclosure();
    case Expr::Op::Var: return lookup(e);
    case Expr::Op::Neg: return -eval_interval_impl(a[0], lookup);
    case Expr::Op::Abs: return abs(eval_interval_impl(a[0], lookup));
    case Expr::Op::Sin: return sin(eval_interval_impl(a[0], lookup));
    case Expr::Op::Cos: return cos(eval_interval_impl(a[0], lookup));
    case Expr::Op::Exp: return exp(eval_interval_impl(a[0], lookup));
    case Expr::Op::Add: return eval_interval_impl(a[0], lookup) + eval_interval_impl(a[1], lookup);
    case Expr::Op::Sub: return eval_interval_impl(a[0], lookup) - eval_interval_impl(a[1], lookup);
    case Expr::Op::Mul: return eval_interval_impl(a[0], lookup) * eval_interval_impl(a[1], lookup);
    case Expr::Op::Div: return eval_interval_impl(a[0], lookup) / eval_interval_impl(a[1], lookup);
    case Expr::Op::Pow: return pow(eval_interval_impl(a[0], lookup), e.exponent());
    case Expr::Op::Min: return min(eval_interval_impl(a[0], lookup), eval_interval_impl(a[1], lookup));
    case Expr::Op::Max: return max(eval_interval_impl(a[0], lookup), eval_interval_impl(a[1], lookup));
  }
  return Interval();
}

}  // namespace

Expr parse_expr(std::string_view text, const std::vector<std::string>& variables) {
  return Parser(text, variables).parse();
}

std::string to_string(const Expr& e) {
  const auto& a = e.args();
  switch (e.op()) {
    case Expr::Op::Const: return format_double(e.value());
    case Expr::Op::Var: return e.name();
    case Expr::Op::Neg: return "(-" + to_string(a[0]) + ")";
    case Expr::Op::Pow: return "(" + to_string(a[0]) + "^" + std::to_string(e.exponent()) + ")";
    case Expr::Op::Add:
    case Expr::Op::Sub:
    case Expr::Op::Mul:
    case Expr::Op::Div:
      return "(" + to_string(a[0]) + " " + operator_symbol(e.op()) + " " + to_string(a[1]) + ")";
    case Expr::Op::Min:
    case Expr::Op::Max:
      return std::string(function_name(e.op())) + "(" + to_string(a[0]) + ", " + to_string(a[1]) + ")";
    default:
      return std::string(function_name(e.op())) + "(" + to_string(a[0]) + ")";
  }
}

double eval_point(const Expr& e, const Point& x) {
  return eval_point_impl(e, [&x](const Expr& v) {
    if (v.index() >= static_cast<std::size_t>(x.size())) throw MissingBinding(v.name());
    return x[static_cast<Eigen::Index>(v.index())];
  });
}

double eval_point(const Expr& e, const std::map<std::string, double>& env) {
  return eval_point_impl(e, [&env](const Expr& v) {
    const auto it = env.find(v.name());
    if (it == env.end()) throw MissingBinding(v.name());
    return it->second;
  });
}

Interval eval_interval(const Expr& e, const Box& x) {
  return eval_interval_impl(e, [&x](const Expr& v) {
    if (v.index() >= x.size()) throw MissingBinding(v.name());
    return x[v.index()];
  });
}

Interval eval_interval(const Expr& e, const std::map<std::string, Interval>& env) {
  return eval_interval_impl(e, [&env](const Expr& v) {
    const auto it = env.find(v.name());
    if (it == env.end()) throw MissingBinding(v.name());
    return it->second;
  });
}

std::size_t variable_extent(const Expr& e) {
  if (e.op() == Expr::Op::Var) return e.index() + 1;
  std::size_t n = 0;
  for (const auto& a : e.args()) n = std::max(n, variable_extent(a));
  return n;
}

}  // namespace fixpave
