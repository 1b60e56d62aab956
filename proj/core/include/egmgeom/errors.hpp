#pragma once

#include <stdexcept>
#include <string>

namespace egmgeom {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input: non-finite values, dimension
/// mismatches, size limits of the small exact oracles, and the like.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Raised by operations that need at least two points (pair bounds,
/// multiplicative solves) when given fewer.
class InsufficientPointsError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// The QP instance admits no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A bracketing or elimination step reached an inconsistent state.
/// Unreachable on valid input; kept as a loud failure mode.
class NumericalFailureError : public Error {
 public:
  using Error::Error;
};

/// The excessive-gap invariant failed beyond tolerance during a solve.
/// Indicates a bug or a Lipschitz constant that is too small.
class GapViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace egmgeom
