#pragma once

#include <stdexcept>

namespace fsl {

// Bad inputs: malformed config files, unknown keys, invalid grids/durations.
// The CLI maps these (and std::domain_error / std::invalid_argument) to exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated numerical contracts: norm/trace drift beyond tolerance, i.e. the
// integrator step was too coarse for the requested run. CLI exit 3.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fsl
