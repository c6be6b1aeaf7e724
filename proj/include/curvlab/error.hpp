#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

/// A point or stencil lies outside the domain on which an object is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input data (e.g. a metric that is not positive definite).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters violate an operation's documented preconditions.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters lie outside the range covered by an explicit construction.
class UnsupportedParameters : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

}  // namespace curvlab
