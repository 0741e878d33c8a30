#pragma once

#include <stdexcept>
#include <string>

namespace cvgn {

// Bad input: wrong shapes, out-of-range parameters, malformed partitions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a mathematical function (e.g. f(x), x < 1).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Failures that come out of the numerics rather than the caller's input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnphysicalStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoSteadyStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationBlowupError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace cvgn
