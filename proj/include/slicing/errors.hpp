#pragma once

#include <stdexcept>
#include <string>

namespace slicing {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Trace content that parses but violates a model invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Lattice enumeration or search ran past its cut budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Predicate is outside the class an algorithm accepts.
class ClassError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Operands built over different computations or vertex sets.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace slicing
