#pragma once

#include <stdexcept>
#include <string>

namespace shiftpois {

/// Invalid user-supplied parameters or configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The resolution-level schedule is empty for the given sample size.
class ScheduleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File or stream failure.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A requested quantity needs data that is not present (e.g. latent shifts).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace shiftpois
