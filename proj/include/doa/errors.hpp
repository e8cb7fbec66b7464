#pragma once

#include <stdexcept>
#include <string>

namespace doa {

// Malformed config file, manifest, or on-disk artifact. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration or controller produced a non-finite value. CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Demographics that yield a non-physical plant (negative volume, clearance
// or lean body mass). The message names the offending field.
class DegenerateProfileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace doa
