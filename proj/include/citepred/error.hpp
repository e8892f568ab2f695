#pragma once

#include <stdexcept>

namespace citepred {

// Input data that violates a documented file format or record invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments, options, or run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace citepred
