#pragma once

#include <stdexcept>
#include <string>

namespace roughkit {

// Argument outside the mathematical domain of an operation (negative time,
// off-grid point, mismatched dimensions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input that is structurally valid but fails a semantic check, e.g. a
// 3-increment that is not closed under delta.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A documented precondition of an algorithm does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// One of the structural hypotheses on the vector fields (nilpotency,
// constant brackets, bracket-generating rank) is violated.
class HypothesisError : public PreconditionError {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : PreconditionError("hypothesis '" + hypothesis + "' failed: " + detail),
        hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// Base for failures of a numerical procedure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FactorizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BlowUpError : public NumericError {
 public:
  BlowUpError(const std::string& what, double time)
      : NumericError(what + " (at time " + std::to_string(time) + ")"), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace roughkit
