#pragma once

#include <stdexcept>
#include <string>

namespace kpunct {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters, dimensions, sizes or malformed input files.  The CLI maps
// these to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct DimensionError : ConfigError {
  using ConfigError::ConfigError;
};

// A problem size exceeded a guard meant to keep dense fallbacks tractable.
struct SizeGuardError : ConfigError {
  using ConfigError::ConfigError;
};

// Non-finite or otherwise unusable numeric input.
struct DataError : ConfigError {
  using ConfigError::ConfigError;
};

// Malformed binary/CSV payload (bad magic, truncation, inconsistent header).
struct FormatError : ConfigError {
  using ConfigError::ConfigError;
};

// Numerical failures (root selection, iteration breakdown).  The CLI maps
// these to exit code 3.
struct NumericError : Error {
  using Error::Error;
};

// Root/branch selection failed while solving a self-consistent equation.
struct BranchError : NumericError {
  using NumericError::NumericError;
};

}  // namespace kpunct
