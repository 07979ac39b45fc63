#pragma once

#include <sys/types.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

#include "gput/errors.hpp"

namespace gput {

/// Operating-system process identifier. Always positive.
class ProcessId {
 public:
  explicit ProcessId(pid_t pid) : pid_(pid) {
    if (pid <= 0) {
      throw ConfigError("process id must be positive, got " + std::to_string(pid));
    }
  }

  static ProcessId self();

  pid_t value() const noexcept { return pid_; }

  friend auto operator<=>(const ProcessId&, const ProcessId&) = default;

 private:
  pid_t pid_;
};

inline std::string to_string(ProcessId pid) { return std::to_string(pid.value()); }

}  // namespace gput

template <>
struct std::hash<gput::ProcessId> {
  std::size_t operator()(const gput::ProcessId& pid) const noexcept {
    return std::hash<pid_t>{}(pid.value());
  }
};
