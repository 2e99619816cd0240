#pragma once

#include <stdexcept>
#include <string>

namespace hypwave {

// Error taxonomy used across the library.  The CLI maps these onto process
// exit codes: validation -> 1, numerical -> 2, io -> 3 (success -> 0).

// Bad input: out-of-domain argument, malformed configuration, schema
// mismatch.  The message lists every offending field when several are known.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation ran but could not meet its accuracy contract: series
// failed to converge, linear solve residual too large, ill-conditioned
// regime.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem or format failure while reading or writing artifacts.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypwave
