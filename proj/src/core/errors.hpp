#pragma once

#include <stdexcept>
#include <string>

namespace lossfluid {

// Argument outside the domain of an operation (time past the horizon, bad step size, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Model parameters that fail validation (nonpositive horizon, r0 outside [0,1], ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed config text or data file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not defined for this configuration (e.g. residual with a nonempty start).
class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Ratio with a zero denominator.
class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lossfluid
