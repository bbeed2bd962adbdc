#pragma once

#include <stdexcept>

namespace spectra {

// Mathematical precondition failures (xi_i = 0, lambda_i = 0, stuck
// reductions). The CLI maps these to exit code 1; user/validation errors
// (std::invalid_argument) map to exit code 2.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spectra
