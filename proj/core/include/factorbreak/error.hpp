#pragma once

#include <stdexcept>
#include <string>

namespace factorbreak {

/// Base class for every error raised by the library. The CLI maps the three
/// subclasses onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or unusable input data (unreadable file, ragged CSV, constant series).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (eigensolver non-convergence, degenerate variance).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Long-run variance of the aggregated residuals is numerically zero, so the
/// standardized statistic is undefined.
class DegenerateVarianceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Invalid configuration (bandwidth out of range, B too small, bad flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Re-throws the active exception with `stage` prefixed to its message,
/// preserving the error class.
[[noreturn]] void rethrow_with_context(const std::string& stage);

}  // namespace factorbreak
