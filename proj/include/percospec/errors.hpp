#pragma once

#include <stdexcept>
#include <string>

namespace percospec {

// Exit-code mapping used by the CLI: ValidationError -> 1, everything else -> 2.

// Invalid input: a violated invariant or precondition. The message names the
// offending field or constraint.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds a resource guard (dimension, animal size, ...).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown that survived all fallbacks.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Monte Carlo estimate has no usable samples.
struct InsufficientStatistics : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace percospec
