#include "gput/proc_metrics.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>

namespace gput {

namespace fs = std::filesystem;

ProcessId ProcessId::self() { return ProcessId(::getpid()); }

namespace {

const fs::path kProcRoot{"/proc"};

std::optional<pid_t> parse_pid(std::string_view text) {
  pid_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value <= 0) return std::nullopt;
  return value;
}

struct StatLine {
  pid_t ppid = 0;
  char state = '?';
};

// /proc/<pid>/stat: "pid (comm) S ppid ...". comm may contain spaces and
// parentheses, so fields are located after the last ')'.
std::optional<StatLine> read_stat(const fs::path& stat_path) {
  std::ifstream in(stat_path);
  std::string line;
  if (!in || !std::getline(in, line)) return std::nullopt;
  const auto close = line.rfind(')');
  if (close == std::string::npos) return std::nullopt;
  std::istringstream rest(line.substr(close + 1));
  StatLine stat;
  if (!(rest >> stat.state >> stat.ppid)) return std::nullopt;
  return stat;
}

bool is_live(char state) { return state != 'Z' && state != 'X' && state != 'x'; }

// Parses "Key:   1234 kB" lines; returns the value in bytes.
std::optional<Bytes> kb_field(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ':') {
    return std::nullopt;
  }
  auto rest = line.substr(key.size() + 1);
  const auto first = rest.find_first_not_of(" \t");
  if (first == std::string_view::npos) return std::nullopt;
  rest.remove_prefix(first);
  Bytes kb = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), kb);
  if (ec != std::errc{}) return std::nullopt;
  return kb * 1024;
}

std::optional<RssValues> read_rollup(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  RssValues values;
  std::string line;
  while (std::getline(in, line)) {
    for (std::string_view key : {"Private_Clean", "Private_Dirty"}) {
      if (auto v = kb_field(line, key)) {
        values.private_rss += *v;
      }
    }
    for (std::string_view key : {"Shared_Clean", "Shared_Dirty"}) {
      if (auto v = kb_field(line, key)) {
        values.shared_rss += *v;
      }
    }
  }
  // Zombies and kernel threads have an empty rollup: a valid zero reading.
  if (in.bad()) return std::nullopt;
  values.total_rss = values.private_rss + values.shared_rss;
  return values;
}

std::optional<Bytes> read_statm_resident(const fs::path& path) {
  std::ifstream in(path);
  Bytes size_pages = 0;
  Bytes resident_pages = 0;
  if (!(in >> size_pages >> resident_pages)) return std::nullopt;
  return resident_pages * static_cast<Bytes>(::sysconf(_SC_PAGESIZE));
}

}  // namespace

std::vector<ProcessId> list_descendants(ProcessId target) {
  return list_descendants(target, kProcRoot);
}

std::vector<ProcessId> list_descendants(ProcessId target, const fs::path& proc_root) {
  std::unordered_map<pid_t, std::vector<pid_t>> children;
  std::error_code ec;
  fs::directory_iterator it(proc_root, ec);
  if (ec) return {};
  for (const auto& entry : it) {
    const auto pid = parse_pid(entry.path().filename().native());
    if (!pid) continue;
    // The process may exit between listing and reading; skip it.
    const auto stat = read_stat(entry.path() / "stat");
    if (!stat || !is_live(stat->state)) continue;
    children[stat->ppid].push_back(*pid);
  }

  std::vector<pid_t> found;
  std::vector<pid_t> frontier{target.value()};
  while (!frontier.empty()) {
    const pid_t parent = frontier.back();
    frontier.pop_back();
    const auto kids = children.find(parent);
    if (kids == children.end()) continue;
    for (pid_t kid : kids->second) {
      if (kid == target.value() || std::find(found.begin(), found.end(), kid) != found.end()) {
        continue;
      }
      found.push_back(kid);
      frontier.push_back(kid);
    }
  }

  std::sort(found.begin(), found.end());
  std::vector<ProcessId> result;
  result.reserve(found.size());
  for (pid_t pid : found) result.emplace_back(pid);
  return result;
}

RssReading read_process_rss_detailed(ProcessId pid) { return read_process_rss_detailed(pid, kProcRoot); }

RssReading read_process_rss_detailed(ProcessId pid, const fs::path& proc_root) {
  const auto dir = proc_root / std::to_string(pid.value());
  if (auto rollup = read_rollup(dir / "smaps_rollup")) {
    return {*rollup, RssSource::kDecomposed};
  }
  if (auto resident = read_statm_resident(dir / "statm")) {
    return {RssValues{*resident, 0, 0}, RssSource::kTotalOnly};
  }
  return {};
}

SystemMemory read_system_memory() { return read_system_memory(kProcRoot); }

SystemMemory read_system_memory(const fs::path& proc_root) {
  std::ifstream in(proc_root / "meminfo");
  if (!in) throw SystemError("cannot read " + (proc_root / "meminfo").string());
  std::optional<Bytes> total;
  std::optional<Bytes> available;
  std::optional<Bytes> free;
  std::string line;
  while (std::getline(in, line)) {
    if (auto v = kb_field(line, "MemTotal")) total = v;
    if (auto v = kb_field(line, "MemAvailable")) available = v;
    if (auto v = kb_field(line, "MemFree")) free = v;
  }
  if (!total) throw SystemError("MemTotal missing from " + (proc_root / "meminfo").string());
  const Bytes headroom = std::min(*total, available.value_or(free.value_or(0)));
  return {*total, *total - headroom};
}

bool process_exists(ProcessId pid) {
  std::error_code ec;
  return fs::exists(kProcRoot / std::to_string(pid.value()) / "stat", ec);
}

RamSnapshot combine_ram(SystemMemory system, const RssReading& main,
                        std::span<const RssReading> descendants) {
  RamSnapshot snap;
  snap.system_capacity = system.capacity;
  snap.system_used = system.used;
  snap.main = main.values;

  bool decomposed = main.source != RssSource::kTotalOnly;
  Bytes private_sum = main.values.private_rss;
  Bytes shared_max = main.values.shared_rss;
  Bytes total_sum = main.values.total_rss;
  for (const auto& member : descendants) {
    snap.descendents += member.values;
    decomposed = decomposed && member.source != RssSource::kTotalOnly;
    private_sum += member.values.private_rss;
    shared_max = std::max(shared_max, member.values.shared_rss);
    total_sum += member.values.total_rss;
  }

  snap.decomposition_available = decomposed;
  if (decomposed) {
    snap.combined = {private_sum + shared_max, private_sum, shared_max};
  } else {
    // Without a split, shared pages cannot be told apart and are summed.
    snap.combined = {total_sum, 0, 0};
    snap.main.private_rss = snap.main.shared_rss = 0;
    snap.descendents = {snap.descendents.total_rss, 0, 0};
  }
  return snap;
}

TreeSample sample_process_tree(ProcessId target) {
  TreeSample sample;
  // Enumerate first, then read each member; members spawned after the
  // enumeration are picked up on the next tick.
  sample.descendants = list_descendants(target);
  sample.target_found = process_exists(target);
  const auto main = read_process_rss_detailed(target);
  std::vector<RssReading> members;
  members.reserve(sample.descendants.size());
  for (const auto& pid : sample.descendants) members.push_back(read_process_rss_detailed(pid));
  sample.ram = combine_ram(read_system_memory(), main, members);
  return sample;
}

}  // namespace gput
