#pragma once

#include <sys/types.h>

#include <chrono>
#include <string>
#include <vector>

namespace gput {

/// Outcome of a child run whose stdout was captured.
struct CaptureResult {
  bool launched = false;  // false: program not found or not executable
  bool timed_out = false;
  int exit_code = -1;     // 128 + signal when killed by a signal
  std::string output;     // child's stdout
  std::string error;      // launch failure description
};

/// Runs argv[0] (PATH lookup) with stdin/stderr on /dev/null and stdout
/// captured. The child is killed once `timeout` elapses.
CaptureResult run_capture(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

/// Spawns argv[0] (PATH lookup) with inherited standard streams. Throws
/// std::system_error if the program cannot be launched.
pid_t spawn_inherit(const std::vector<std::string>& argv);

/// Blocks until `pid` exits; returns its exit code, or 128 + signal.
/// Retries on EINTR.
int wait_exit_code(pid_t pid);

/// Maps a raw waitpid status to an exit code (128 + signal when signalled).
int decode_wait_status(int status);

}  // namespace gput
