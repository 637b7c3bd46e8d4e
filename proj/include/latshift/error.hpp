#pragma once

#include <stdexcept>
#include <string>

namespace latshift {

/// Invalid argument or malformed input (bad generating vector, wrong bit
/// length, unparsable file, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well formed but exceeds an enumeration guard, or that
/// asks for an analysis whose preconditions do not hold (e.g. r < m for the
/// grid-shift mean).
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A file bit source ran out of bits.
class BitsExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fourier-space operation was asked of a function without a Fourier model.
class MissingFourierModel : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace latshift
