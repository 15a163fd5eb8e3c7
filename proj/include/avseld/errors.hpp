#pragma once

#include <stdexcept>

namespace avseld {

// Base class for all toolkit errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated preconditions, invalid arguments, bad configuration.
// The CLI maps these to exit code 1.
struct validation_error : error {
  using error::error;
};

// Malformed or inconsistent external data (files, byte streams).
// The CLI maps these to exit code 2.
struct data_error : error {
  using error::error;
};

// A DOA estimate cannot be formed (near-zero intensity, e.g. silence).
struct estimate_error : error {
  using error::error;
};

}  // namespace avseld
