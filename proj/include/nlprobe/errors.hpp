#pragma once

#include <stdexcept>
#include <string>

namespace nlprobe {

/// Process exit codes used by the command-line harness.
enum class ExitCode : int {
  kSuccess = 0,
  kValidation = 2,
  kNumericalDomain = 3,
  kNonConvergence = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Bad configuration or violated precondition detected before any compute.
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kValidation; }
};

/// Initial data too large for the contraction argument (fl1 >= delta0).
class ThresholdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Arguments outside the region where the model is defined, e.g. |u|^2 >= R.
class DomainError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericalDomain; }
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNonConvergence; }
};

class ShapeMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyMaskError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace nlprobe
