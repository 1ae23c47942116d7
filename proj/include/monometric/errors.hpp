#pragma once

#include <stdexcept>
#include <string>

namespace monometric {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument outside the mathematical domain of an operation
// (non-positive eigenvalue argument, negative determinant, bad beta, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A difference kernel g1 - g2 went negative: the hypothesis g1 >= g2 failed.
class DominanceViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

// Input data violates a documented invariant (Hermiticity, trace, positivity,
// schema). Messages name the invariant and the offending entry.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A quantity that is real/PSD by construction came out otherwise. Signals a
// numerics bug, never a physics result.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace monometric
