#include "gput/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>

#include "gput/errors.hpp"

namespace gput {

using Clock = std::chrono::steady_clock;

void validate(const TrackerConfig& config) {
  if (!(config.sleep_time > 0.0) || !std::isfinite(config.sleep_time)) {
    throw ConfigError("sleep_time must be a positive number of seconds");
  }
  if (config.n_join_attempts < 1) {
    throw ConfigError("n_join_attempts must be at least 1");
  }
  if (!(config.join_timeout > 0.0) || !std::isfinite(config.join_timeout)) {
    throw ConfigError("join_timeout must be a positive number of seconds");
  }
}

ScaledRss scale_rss(const RssValues& values, RamUnit unit) {
  ScaledRss scaled;
  scaled.private_rss = convert_ram(values.private_rss, unit);
  scaled.shared_rss = convert_ram(values.shared_rss, unit);
  scaled.total_rss = values.private_rss + values.shared_rss == values.total_rss
                         ? scaled.private_rss + scaled.shared_rss
                         : convert_ram(values.total_rss, unit);
  return scaled;
}

TrackingResults scale_results(const PeakUsage& peaks, const TrackerConfig& config,
                              std::vector<std::string> notes) {
  TrackingResults results;
  auto& ram = results.max_ram;
  ram.unit = config.ram_unit;
  ram.system_capacity = convert_ram(peaks.system_capacity, config.ram_unit);
  ram.system = convert_ram(peaks.system, config.ram_unit);
  ram.main = scale_rss(peaks.main, config.ram_unit);
  ram.descendents = scale_rss(peaks.descendents, config.ram_unit);
  ram.combined = scale_rss(peaks.combined, config.ram_unit);

  auto& gpu = results.max_gpu_ram;
  gpu.unit = config.gpu_ram_unit;
  gpu.main = convert_ram(peaks.gpu.main, config.gpu_ram_unit);
  gpu.descendents = convert_ram(peaks.gpu.descendents, config.gpu_ram_unit);
  gpu.combined = convert_ram(peaks.gpu.combined, config.gpu_ram_unit);

  results.compute_time = {config.time_unit, convert_time(peaks.elapsed_seconds, config.time_unit)};
  results.notes = std::move(notes);
  return results;
}

struct Tracker::Shared {
  Shared(TrackerConfig cfg, ProcessId pid, TrackerSources src)
      : config(std::move(cfg)), target(pid), sources(std::move(src)) {}

  const TrackerConfig config;
  const ProcessId target;
  const TrackerSources sources;

  mutable std::mutex mutex;
  std::condition_variable wake;
  std::condition_variable finished_cv;
  bool stop_requested = false;
  bool finished = false;

  State state = State::kCreated;
  Clock::time_point started;
  std::size_t samples = 0;
  PeakUsage peaks;
  std::vector<std::string> notes;
  std::optional<TrackingResults> frozen;
  PeakUsage frozen_peaks;

  void add_note(std::string note) {
    if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(std::move(note));
  }

  double elapsed_at(Clock::time_point when) const {
    return std::chrono::duration<double>(when - started).count();
  }

  void sample_once();
  void run();
};

namespace {

void raise_scope(RssValues& stored, const RssValues& sample) {
  if (sample.total_rss > stored.total_rss) stored = sample;
}

}  // namespace

void Tracker::Shared::sample_once() {
  std::optional<TreeSample> tree;
  std::optional<std::string> ram_error;
  try {
    tree = sources.ram->sample(target);
  } catch (const std::exception& e) {
    ram_error = std::string("RAM sample failed: ") + e.what();
  }

  GpuUsageMap usage;
  std::optional<std::string> gpu_error;
  try {
    usage = sources.gpu->query();
  } catch (const std::exception& e) {
    gpu_error = std::string("GPU sample failed: ") + e.what();
  }
  const auto gpu_note = sources.gpu->note();
  const auto now = Clock::now();

  std::lock_guard lock(mutex);
  if (ram_error) add_note(*ram_error);
  if (gpu_error) add_note(*gpu_error);
  if (gpu_note) add_note(*gpu_note);
  if (tree) {
    if (samples == 0 && !tree->target_found) {
      add_note("process " + to_string(target) + " was not running when tracking started");
    }
    const auto& ram = tree->ram;
    peaks.system_capacity = ram.system_capacity;
    peaks.system = std::max(peaks.system, ram.system_used);
    raise_scope(peaks.main, ram.main);
    raise_scope(peaks.descendents, ram.descendents);
    raise_scope(peaks.combined, ram.combined);

    const auto gpu = snapshot_gpu(target, tree->descendants, usage);
    peaks.gpu.main = std::max(peaks.gpu.main, gpu.main);
    peaks.gpu.descendents = std::max(peaks.gpu.descendents, gpu.descendents);
    peaks.gpu.combined = std::max(peaks.gpu.combined, gpu.combined);
  }
  peaks.elapsed_seconds = std::max(peaks.elapsed_seconds, elapsed_at(now));
  ++samples;
}

void Tracker::Shared::run() {
  const auto interval = std::chrono::duration<double>(config.sleep_time);
  for (;;) {
    sample_once();
    std::unique_lock lock(mutex);
    if (wake.wait_for(lock, interval, [this] { return stop_requested; })) break;
  }
  {
    std::lock_guard lock(mutex);
    finished = true;
  }
  finished_cv.notify_all();
}

Tracker::Tracker(TrackerConfig config, TrackerSources sources)
    : config_(std::move(config)), target_(config_.process_id.value_or(ProcessId::self())) {
  validate(config_);
  if (!sources.ram) sources.ram = std::make_shared<ProcRamSource>();
  if (!sources.gpu) sources.gpu = std::make_shared<NvidiaSmiBackend>();
  shared_ = std::make_shared<Shared>(config_, target_, std::move(sources));
}

Tracker::~Tracker() {
  if (state() == State::kRunning) {
    try {
      stop();
    } catch (...) {
    }
  }
  if (sampler_.joinable()) sampler_.detach();
}

Tracker::State Tracker::state() const {
  std::lock_guard lock(shared_->mutex);
  return shared_->state;
}

void Tracker::start() {
  {
    std::lock_guard lock(shared_->mutex);
    if (shared_->state != State::kCreated) {
      throw LifecycleError("tracker can only be started once");
    }
    shared_->state = State::kRunning;
    shared_->started = Clock::now();
  }
  // The thread owns a reference so an abandoned sampler stays valid.
  sampler_ = std::thread([shared = shared_] { shared->run(); });
}

TrackingResults Tracker::stop() {
  const auto stopped_at = Clock::now();
  {
    std::lock_guard lock(shared_->mutex);
    if (shared_->state != State::kRunning) {
      throw LifecycleError("tracker can only be stopped while running");
    }
    shared_->stop_requested = true;
  }
  shared_->wake.notify_all();

  const auto timeout = std::chrono::duration<double>(config_.join_timeout);
  bool joined = false;
  join_attempts_ = 0;
  for (int attempt = 0; attempt < config_.n_join_attempts && !joined; ++attempt) {
    ++join_attempts_;
    std::unique_lock lock(shared_->mutex);
    joined = shared_->finished_cv.wait_for(lock, timeout, [this] { return shared_->finished; });
  }

  if (joined) {
    sampler_.join();
  } else {
    std::ostringstream message;
    message << "the sampler thread could not be joined after " << join_attempts_
            << " attempt(s) of " << config_.join_timeout << " s";
    const auto warning = message.str();
    std::cerr << "gpu-tracker warning: " << warning << std::endl;
    if (config_.kill_if_join_fails) {
      std::cerr << "gpu-tracker: terminating because kill_if_join_fails is set" << std::endl;
      std::_Exit(EXIT_FAILURE);
    }
    sampler_.detach();
    std::lock_guard lock(shared_->mutex);
    shared_->add_note(warning);
  }

  std::lock_guard lock(shared_->mutex);
  shared_->peaks.elapsed_seconds =
      std::max(shared_->peaks.elapsed_seconds, shared_->elapsed_at(stopped_at));
  shared_->frozen_peaks = shared_->peaks;
  shared_->frozen = scale_results(shared_->peaks, config_, shared_->notes);
  shared_->state = State::kStopped;
  return *shared_->frozen;
}

TrackingResults Tracker::current_results() const {
  const auto now = Clock::now();
  std::lock_guard lock(shared_->mutex);
  switch (shared_->state) {
    case State::kCreated:
      throw LifecycleError("tracker has not been started");
    case State::kStopped:
      return *shared_->frozen;
    case State::kRunning:
      break;
  }
  auto peaks = shared_->peaks;
  peaks.elapsed_seconds = std::max(peaks.elapsed_seconds, shared_->elapsed_at(now));
  return scale_results(peaks, config_, shared_->notes);
}

PeakUsage Tracker::current_peaks() const {
  std::lock_guard lock(shared_->mutex);
  if (shared_->state == State::kCreated) throw LifecycleError("tracker has not been started");
  return shared_->state == State::kStopped ? shared_->frozen_peaks : shared_->peaks;
}

}  // namespace gput
