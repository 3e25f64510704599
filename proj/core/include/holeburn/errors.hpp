#pragma once

#include <stdexcept>
#include <string>

namespace holeburn {

// Error categories map onto CLI exit codes: config 2, numeric 3, io 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fit degeneracy (e.g. time-constant collision) is numeric but worth
// distinguishing so callers can report which parameters collided.
class DegenerateFitError : public NumericError {
 public:
  explicit DegenerateFitError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace holeburn
