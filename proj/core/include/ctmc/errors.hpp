#pragma once

#include <stdexcept>
#include <string>

namespace ctmc {

/// Malformed input: dimension mismatch, bad argument ranges, parse failures.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model object failed one or more of its invariants.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// The Perron eigenvalue of G - R is not strictly negative.
class RecoveryHypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The bond-difference system is singular or badly conditioned.
class UnhedgeableBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a result that contradicts a mathematical guarantee.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctmc
