#pragma once

#include <stdexcept>
#include <string>

namespace qlo {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An internal consistency check failed (identity breach, stage invariant...)
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace qlo
