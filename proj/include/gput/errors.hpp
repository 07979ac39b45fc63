#pragma once

#include <stdexcept>
#include <string>

namespace gput {

/// Invalid tracker or CLI configuration (bad numeric knob, bad enum string).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A unit string outside the accepted vocabulary.
class UnitError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Tracker used out of order (start twice, stop before start, ...).
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed GPU query output or report document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The platform memory facility could not be read.
class SystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gput
