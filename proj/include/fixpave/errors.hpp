#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fixpave {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public Error {
 public:
  DivisionByZeroInterval() : Error("interval division by an interval containing 0") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class DegenerateBox : public Error {
 public:
  DegenerateBox() : Error("cannot bisect a box of diameter 0") {}
};

// Point or interval evaluation failed (overflow, division by zero, ...).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public EvaluationError {
 public:
  DivisionByZero() : EvaluationError("division by zero") {}
};

class MissingBinding : public EvaluationError {
 public:
  explicit MissingBinding(const std::string& name)
      : EvaluationError("no binding for variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonFiniteInterval : public EvaluationError {
 public:
  NonFiniteInterval() : EvaluationError("interval endpoint overflowed to infinity") {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name)
      : Error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public Error {
 public:
  ArityError(const std::string& function, std::size_t expected, std::size_t got)
      : Error("function '" + function + "' takes " + std::to_string(expected) +
              " argument(s), got " + std::to_string(got)) {}
};

class ElementNotInGround : public Error {
 public:
  using Error::Error;
};

class InvalidSegments : public Error {
 public:
  using Error::Error;
};

// An image oracle failed while the engine was querying it.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

class InvalidPoset : public Error {
 public:
  using Error::Error;
};

class PosetTooLarge : public Error {
 public:
  PosetTooLarge(std::size_t size, std::size_t limit)
      : Error("poset has " + std::to_string(size) + " elements; exhaustive checks are limited to " +
              std::to_string(limit)) {}
};

class NonStabilizing : public Error {
 public:
  using Error::Error;
};

class InvalidGame : public Error {
 public:
  using Error::Error;
};

}  // namespace fixpave
