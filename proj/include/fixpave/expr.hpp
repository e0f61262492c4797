#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fixpave/box.hpp"
#include "fixpave/interval.hpp"

namespace fixpave {

/// Immutable arithmetic expression over indexed variables.
///
/// The language is closed: decimal constants, variables, unary -, abs, sin,
/// cos, exp, binary + - * /, min, max and ^ with a nonnegative integer
/// literal exponent. Copies share the tree.
class Expr {
 public:
  enum class Op { Const, Var, Neg, Abs, Sin, Cos, Exp, Add, Sub, Mul, Div, Pow, Min, Max };

  /// Constant whose value is exactly representable.
  static Expr constant(double value);
  /// Constant with a nearest value and a guaranteed enclosure of the literal.
  static Expr constant(double nearest, Interval enclosure);
  static Expr variable(std::size_t index, std::string name);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, unsigned exponent);

  Op op() const noexcept;
  double value() const noexcept;
  const Interval& enclosure() const noexcept;
  std::size_t index() const noexcept;
  const std::string& name() const noexcept;
  unsigned exponent() const noexcept;
  const std::vector<Expr>& args() const noexcept;

  /// Structural equality; constants compare by nearest value.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parse text over the given variables (variable i gets index i).
/// Precedence: ^ > unary - > * / > + -; binary operators are left associative.
/// Throws SyntaxError (with byte offset), UnknownVariable or ArityError.
Expr parse_expr(std::string_view text, const std::vector<std::string>& variables);

/// Fully parenthesized text that parses back to an equal expression.
std::string to_string(const Expr& e);

/// Variable i takes x[i]. Throws DivisionByZero, MissingBinding or
/// EvaluationError on a non-finite result.
double eval_point(const Expr& e, const Point& x);
double eval_point(const Expr& e, const std::map<std::string, double>& env);

/// Natural interval extension: contains eval_point for every point of the box.
/// Throws DivisionByZeroInterval, MissingBinding or NonFiniteInterval.
Interval eval_interval(const Expr& e, const Box& x);
Interval eval_interval(const Expr& e, const std::map<std::string, Interval>& env);

/// Largest variable index referenced plus one (0 for constant expressions).
std::size_t variable_extent(const Expr& e);

}  // namespace fixpave
