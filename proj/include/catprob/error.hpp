#pragma once

#include <stdexcept>
#include <string>

namespace catprob {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad labels, masks, files, or violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Spaces of two arguments do not line up.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The requested quantity does not exist, e.g. conditioning on a zero-validity effect.
class MathError : public Error {
 public:
  using Error::Error;
};

}  // namespace catprob
