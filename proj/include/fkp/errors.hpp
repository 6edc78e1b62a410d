#pragma once

#include <stdexcept>
#include <string>

namespace fkp {

/// Malformed input: bad shapes, non-finite values, out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raw dataset whose empirical covariance is singular.
class DegenerateDataset : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A problem size exceeds a configured dense limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Qubit index out of range or overlapping control/target sets.
class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Occupation index above a register cap.
class EncodingError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Internal invariant broken (missing parent coefficient, non-real Pauli map,
/// negative residual amplitude, ...).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fkp
