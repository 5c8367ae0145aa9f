#pragma once

#include <stdexcept>
#include <string>

namespace qbattery {

/// A computation that is mathematically defined but failed numerically
/// (bracket lost, step size underflow, truncation breach, positivity loss).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integrator could not make progress: the step size fell below
/// the floating-point resolution of the current time.
class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Probability mass reached the top of a truncated Fock ladder.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The requested operation has no meaning for the given pulse variant.
class UnsupportedPulse : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qbattery
