#pragma once

// Resident-set and system memory readings for a process tree.
//
// All figures are integer byte counts. On Linux the private/shared split
// comes from /proc/<pid>/smaps_rollup; if that file is unreadable the
// reading falls back to the total resident size only.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gput/process_id.hpp"

namespace gput {

using Bytes = std::uint64_t;

struct RssValues {
  Bytes total_rss = 0;
  Bytes private_rss = 0;
  Bytes shared_rss = 0;

  friend bool operator==(const RssValues&, const RssValues&) = default;

  RssValues& operator+=(const RssValues& other) noexcept {
    total_rss += other.total_rss;
    private_rss += other.private_rss;
    shared_rss += other.shared_rss;
    return *this;
  }
};

enum class RssSource {
  kDecomposed,  // private + shared available
  kTotalOnly,   // only the total resident size could be read
  kMissing,     // process vanished or never existed
};

struct RssReading {
  RssValues values;
  RssSource source = RssSource::kMissing;
};

struct SystemMemory {
  Bytes capacity = 0;
  Bytes used = 0;
};

struct RamSnapshot {
  Bytes system_capacity = 0;
  Bytes system_used = 0;
  RssValues main;
  RssValues descendents;
  RssValues combined;
  bool decomposition_available = true;
};

/// Live transitive children of `target`, excluding `target`. Empty if the
/// target is gone. Sorted, no duplicates.
std::vector<ProcessId> list_descendants(ProcessId target);

/// Same as list_descendants but reading from an alternate procfs root.
std::vector<ProcessId> list_descendants(ProcessId target, const std::filesystem::path& proc_root);

RssReading read_process_rss_detailed(ProcessId pid);
RssReading read_process_rss_detailed(ProcessId pid, const std::filesystem::path& proc_root);

/// Current RSS of `pid`; all zeros if the process is gone.
inline RssValues read_process_rss(ProcessId pid) { return read_process_rss_detailed(pid).values; }

/// Throws SystemError if /proc/meminfo cannot be read or lacks MemTotal.
SystemMemory read_system_memory();
SystemMemory read_system_memory(const std::filesystem::path& proc_root);

/// True if a /proc entry exists for `pid` (zombies included).
bool process_exists(ProcessId pid);

/// Folds member readings into main/descendents/combined. Shared memory is
/// counted once across the tree by taking the largest member shared figure.
RamSnapshot combine_ram(SystemMemory system, const RssReading& main,
                        std::span<const RssReading> descendants);

/// Full snapshot plus the descendant set it was computed over.
struct TreeSample {
  RamSnapshot ram;
  std::vector<ProcessId> descendants;
  bool target_found = false;
};

TreeSample sample_process_tree(ProcessId target);

inline RamSnapshot snapshot_ram(ProcessId target) { return sample_process_tree(target).ram; }

/// Source of RAM samples for the tracker. The production implementation
/// reads procfs; tests substitute scripted sources.
class RamSource {
 public:
  virtual ~RamSource() = default;
  virtual TreeSample sample(ProcessId target) = 0;
};

class ProcRamSource final : public RamSource {
 public:
  TreeSample sample(ProcessId target) override { return sample_process_tree(target); }
};

}  // namespace gput
