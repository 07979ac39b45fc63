#pragma once

// Deterministic RAM/GPU sources for driving the tracker's sampler.

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <random>
#include <vector>

#include "gput/gpu_metrics.hpp"
#include "gput/proc_metrics.hpp"

namespace gput::testing {

/// Replays a fixed list of tree samples, then repeats the last one.
class ScriptedRamSource final : public RamSource {
 public:
  explicit ScriptedRamSource(std::vector<TreeSample> script) : script_(std::move(script)) {}

  TreeSample sample(ProcessId) override {
    std::lock_guard lock(mutex_);
    const auto index = std::min(calls_, script_.size() - 1);
    ++calls_;
    cv_.notify_all();
    return script_[index];
  }

  /// Blocks until every scripted tick has been served.
  bool wait_consumed(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [&] { return calls_ >= script_.size(); });
  }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<TreeSample> script_;
  std::size_t calls_ = 0;
};

/// Replays usage maps, then repeats the last one.
class ScriptedGpuBackend final : public GpuBackend {
 public:
  explicit ScriptedGpuBackend(std::vector<GpuUsageMap> script) : script_(std::move(script)) {}

  GpuUsageMap query() override {
    std::lock_guard lock(mutex_);
    if (script_.empty()) return {};
    const auto index = std::min(calls_++, script_.size() - 1);
    return script_[index];
  }

 private:
  std::mutex mutex_;
  std::vector<GpuUsageMap> script_;
  std::size_t calls_ = 0;
};

/// A RAM source whose sample() blocks until released, so the sampler
/// ignores stop requests.
class BlockingRamSource final : public RamSource {
 public:
  TreeSample sample(ProcessId) override {
    std::unique_lock lock(mutex_);
    entered_ = true;
    cv_.notify_all();
    cv_.wait(lock, [&] { return released_; });
    return {};
  }

  bool wait_entered(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [&] { return entered_; });
  }

  void release() {
    std::lock_guard lock(mutex_);
    released_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  bool entered_ = false;
  bool released_ = false;
};

inline RssValues random_rss(std::mt19937_64& rng, Bytes max) {
  std::uniform_int_distribution<Bytes> dist(0, max);
  const Bytes priv = dist(rng);
  const Bytes shared = dist(rng);
  return {priv + shared, priv, shared};
}

/// One scripted tick: RAM tree sample plus the GPU map served alongside it.
struct ScriptTick {
  TreeSample tree;
  GpuUsageMap gpu;
};

inline constexpr pid_t kScriptTarget = 4242;

/// Random ticks for a fixed target with a varying set of descendants.
/// Values are drawn from a small range so ties in totals occur.
inline std::vector<ScriptTick> random_script(std::mt19937_64& rng, std::size_t ticks) {
  std::uniform_int_distribution<int> kid_count(0, 3);
  std::uniform_int_distribution<Bytes> used(0, 1ULL << 33);
  std::uniform_int_distribution<GpuBytes> gpu_mem(0, 40);
  std::bernoulli_distribution present(0.7);
  std::vector<ScriptTick> script;
  for (std::size_t i = 0; i < ticks; ++i) {
    ScriptTick tick;
    tick.tree.target_found = true;
    tick.tree.ram.system_capacity = 1ULL << 34;
    tick.tree.ram.system_used = used(rng);
    const Bytes scale = (i % 7 == 0) ? (1ULL << 30) : 50;
    tick.tree.ram.main = random_rss(rng, scale);
    tick.tree.ram.descendents = random_rss(rng, scale);
    tick.tree.ram.combined = random_rss(rng, scale);
    const int kids = kid_count(rng);
    for (int k = 0; k < kids; ++k) tick.tree.descendants.emplace_back(kScriptTarget + 1 + k);
    if (present(rng)) tick.gpu[ProcessId(kScriptTarget)] = gpu_mem(rng) * 1'000'000;
    for (int k = 1; k <= 4; ++k) {
      if (present(rng)) tick.gpu[ProcessId(kScriptTarget + k)] = gpu_mem(rng) * 1'000'000;
    }
    script.push_back(std::move(tick));
  }
  return script;
}

}  // namespace gput::testing
