#pragma once

#include <stdexcept>
#include <string>

namespace fireline {

// Invalid parameters: non-positive horizons, lambda outside (0,1), bad box sizes.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two marks share a coordinate. Has probability zero under the continuous model.
class DuplicateCoordinateError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A query or update outside the simulated box or time range.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A simulator self-check failed. Always a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fireline
