#pragma once

#include <stdexcept>
#include <string>

namespace srf {

// Shape or dimension contract violation. The message always names the
// offending extents.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad configuration value (range, missing field, unknown key).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numeric run that cannot continue (non-finite loss, invalid state).
struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srf
