#pragma once

// Command-line front end: runs a command as a child process and reports
// the peak resource usage of it and its descendants.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gput/report.hpp"
#include "gput/tracker.hpp"

namespace gput::cli {

inline constexpr int kUsageError = 2;
inline constexpr int kSpawnFailure = 127;

struct CliOptions {
  std::string execute;
  std::optional<std::filesystem::path> output;
  ReportFormat format = ReportFormat::kText;
  TrackerConfig tracker;  // units and sleep_time from the flags
};

/// Either options to run, or a message (help text or usage error) with the
/// exit code the program should return.
struct ParseOutcome {
  std::optional<CliOptions> options;
  int exit_code = 0;
  std::string message;
};

/// `args` includes the program name at index 0.
ParseOutcome parse_args(const std::vector<std::string>& args);

std::string help_text();

/// Spawns the command, tracks it until it exits, prints the status line to
/// `out` and the report to `out` or opts.output. Returns the child's exit
/// code, or kUsageError / kSpawnFailure.
int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace gput::cli
