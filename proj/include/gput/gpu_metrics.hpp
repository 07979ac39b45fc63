#pragma once

// Per-process GPU memory via the vendor query tool.
//
// The production backend runs
//   nvidia-smi --query-compute-apps=pid,used_memory --format=csv
// and parses its CSV. A reported figure of N (MiB-labelled) is stored as
// N * 10^6 bytes so that reported megabyte/gigabyte values match the
// tool's numbers digit for digit.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gput/process_id.hpp"

namespace gput {

using GpuBytes = std::uint64_t;

/// pid -> GPU RAM in bytes. Absent pids use no GPU RAM.
using GpuUsageMap = std::map<ProcessId, GpuBytes>;

struct GpuSnapshot {
  GpuBytes main = 0;
  GpuBytes descendents = 0;
  GpuBytes combined = 0;

  friend bool operator==(const GpuSnapshot&, const GpuSnapshot&) = default;
};

inline constexpr GpuBytes kBytesPerReportedUnit = 1'000'000;

/// Parses `--query-compute-apps=pid,used_memory --format=csv` output. The
/// first non-blank line is the header. Rows for the same pid (one per GPU)
/// are summed. Throws ParseError naming the 1-based line number.
GpuUsageMap parse_compute_apps_csv(std::string_view text);

/// Attributes usage to the target and its descendants. GPU memory is
/// treated as unshared, so combined = main + descendents.
GpuSnapshot snapshot_gpu(ProcessId target, std::span<const ProcessId> descendants,
                         const GpuUsageMap& usage);

class GpuBackend {
 public:
  virtual ~GpuBackend() = default;
  virtual GpuUsageMap query() = 0;
  /// Latched availability/warning note, if any.
  virtual std::optional<std::string> note() const { return std::nullopt; }
};

struct NvidiaSmiOptions {
  std::string executable = "nvidia-smi";
  std::chrono::milliseconds timeout{5000};
};

class NvidiaSmiBackend final : public GpuBackend {
 public:
  explicit NvidiaSmiBackend(NvidiaSmiOptions options = {});

  GpuUsageMap query() override;
  std::optional<std::string> note() const override;

 private:
  void latch(std::string message);

  NvidiaSmiOptions options_;
  mutable std::mutex mutex_;
  std::optional<std::string> note_;
  bool tool_missing_ = false;
};

/// Reads fixture files verbatim. Throws ParseError if one is unreadable.
std::vector<std::string> load_gpu_fixtures(std::span<const std::filesystem::path> paths);

/// Serves recorded CSV fixtures in order; keeps returning the last one
/// after the list is exhausted.
class ReplayGpuBackend final : public GpuBackend {
 public:
  explicit ReplayGpuBackend(std::vector<std::string> fixtures);

  GpuUsageMap query() override;

 private:
  std::mutex mutex_;
  std::vector<std::string> fixtures_;
  std::size_t next_ = 0;
};

}  // namespace gput
