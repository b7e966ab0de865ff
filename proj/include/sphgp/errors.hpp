#pragma once

#include <stdexcept>
#include <string>

namespace sphgp {

// Bad input: argument ranges, config fields, grid resolution, shapes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class ResolutionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class ShapeError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class ConfigError : public ArgumentError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : ArgumentError("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Numerically invalid model state: non positive-definite covariances,
// degenerate measures, singular determinants, failed estimation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EstimationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sphgp
