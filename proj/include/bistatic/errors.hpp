#pragma once

#include <stdexcept>
#include <string>

namespace bistatic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target coincides with transmitter or receiver position.
struct CollocatedError : Error {
  using Error::Error;
};

// Input outside the mathematical domain of the operation.
struct DomainError : Error {
  using Error::Error;
};

// A matrix that must be invertible / positive definite is not.
struct SingularityError : Error {
  using Error::Error;
};

// Maneuver constraints admit no command.
struct EmptyLibraryError : Error {
  using Error::Error;
};

// Estimate/truth sequences of different lengths.
struct LengthMismatchError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Bad scenario configuration; message names the offending key.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace bistatic
