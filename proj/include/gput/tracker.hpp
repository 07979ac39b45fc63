#pragma once

// Background peak-usage tracker.
//
// A Tracker samples RAM (process tree + system) and GPU RAM on a
// background thread every `sleep_time` seconds and keeps, per scope, the
// sample with the largest total. It is single use:
// Created -> Running -> Stopped.
//
//   gput::Tracker tracker;
//   tracker.start();
//   run_workload();
//   auto results = tracker.stop();
//   std::cout << gput::render_text(results) << '\n';

#include <chrono>
#include <cstddef>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "gput/gpu_metrics.hpp"
#include "gput/proc_metrics.hpp"
#include "gput/process_id.hpp"
#include "gput/units.hpp"

namespace gput {

struct TrackerConfig {
  double sleep_time = 1.0;  // seconds between samples
  RamUnit ram_unit = RamUnit::kGigabytes;
  RamUnit gpu_ram_unit = RamUnit::kGigabytes;
  TimeUnit time_unit = TimeUnit::kHours;
  std::optional<ProcessId> process_id;  // unset: the calling process
  int n_join_attempts = 5;
  double join_timeout = 10.0;  // seconds per join attempt
  bool kill_if_join_fails = false;
};

/// Throws ConfigError on a nonpositive sleep_time/join_timeout or
/// n_join_attempts < 1.
void validate(const TrackerConfig& config);

struct ScaledRss {
  double total_rss = 0.0;
  double private_rss = 0.0;
  double shared_rss = 0.0;

  friend bool operator==(const ScaledRss&, const ScaledRss&) = default;
};

struct MaxRam {
  RamUnit unit = RamUnit::kGigabytes;
  double system_capacity = 0.0;
  double system = 0.0;
  ScaledRss main;
  ScaledRss descendents;
  ScaledRss combined;

  friend bool operator==(const MaxRam&, const MaxRam&) = default;
};

struct MaxGpuRam {
  RamUnit unit = RamUnit::kGigabytes;
  double main = 0.0;
  double descendents = 0.0;
  double combined = 0.0;

  friend bool operator==(const MaxGpuRam&, const MaxGpuRam&) = default;
};

struct ComputeTime {
  TimeUnit unit = TimeUnit::kHours;
  double time = 0.0;

  friend bool operator==(const ComputeTime&, const ComputeTime&) = default;
};

struct TrackingResults {
  MaxRam max_ram;
  MaxGpuRam max_gpu_ram;
  ComputeTime compute_time;
  std::vector<std::string> notes;

  friend bool operator==(const TrackingResults&, const TrackingResults&) = default;
};

/// Unscaled per-scope maxima.
struct PeakUsage {
  Bytes system_capacity = 0;
  Bytes system = 0;
  RssValues main;
  RssValues descendents;
  RssValues combined;
  GpuSnapshot gpu;  // each field is its own running max
  double elapsed_seconds = 0.0;
};

/// Scales an RSS triple. When private + shared == total (bytes), the
/// scaled total is the sum of the scaled parts so the identity survives
/// rounding.
ScaledRss scale_rss(const RssValues& values, RamUnit unit);

TrackingResults scale_results(const PeakUsage& peaks, const TrackerConfig& config,
                              std::vector<std::string> notes);

struct TrackerSources {
  std::shared_ptr<RamSource> ram;  // default: procfs
  std::shared_ptr<GpuBackend> gpu;  // default: nvidia-smi
};

class Tracker {
 public:
  enum class State { kCreated, kRunning, kStopped };

  /// Validates `config`; throws ConfigError.
  explicit Tracker(TrackerConfig config = {}, TrackerSources sources = {});
  ~Tracker();

  Tracker(const Tracker&) = delete;
  Tracker& operator=(const Tracker&) = delete;

  /// Launches the sampler. The first sample is taken immediately.
  void start();

  /// Stops the sampler using the bounded join protocol and freezes the
  /// results. If the sampler cannot be joined after n_join_attempts waits
  /// of join_timeout each, a warning note is added and the thread is
  /// abandoned (or the program exits when kill_if_join_fails is set).
  TrackingResults stop();

  /// Results so far (Running) or the frozen results (Stopped).
  TrackingResults current_results() const;
  PeakUsage current_peaks() const;

  State state() const;
  const TrackerConfig& config() const noexcept { return config_; }
  ProcessId target() const noexcept { return target_; }
  /// Timed waits performed by the last stop().
  std::size_t join_attempts() const noexcept { return join_attempts_; }

 private:
  struct Shared;

  TrackerConfig config_;
  ProcessId target_;
  std::shared_ptr<Shared> shared_;
  std::thread sampler_;
  std::size_t join_attempts_ = 0;
};

/// Runs `body` between start() and stop(). The tracker is stopped even if
/// `body` throws; the exception is then rethrown.
template <typename Body>
TrackingResults scoped_track(TrackerConfig config, Body&& body, TrackerSources sources = {}) {
  Tracker tracker(std::move(config), std::move(sources));
  tracker.start();
  try {
    std::forward<Body>(body)();
  } catch (...) {
    tracker.stop();
    throw;
  }
  return tracker.stop();
}

}  // namespace gput
