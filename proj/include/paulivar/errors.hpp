#pragma once

#include <stdexcept>
#include <string>

namespace paulivar {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Malformed input text (Hamiltonian files, schedules, cover files).
/// Carries the 1-based line number when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message
                   : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A requested operation cannot run on the given inputs (truncated clique
/// sets, zero-weight groups, invalid covers, count mismatches).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach its tolerance within its budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double best_residual)
      : Error(message), best_residual_(best_residual) {}

  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Numerical self-consistency violated (should not happen on valid inputs).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace paulivar
