#include "gput/gpu_metrics.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gput/errors.hpp"
#include "gput/subprocess.hpp"

namespace gput {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_whole(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

[[noreturn]] void bad_line(std::size_t number, std::string_view line, std::string_view why) {
  std::ostringstream msg;
  msg << "line " << number << ": " << why << ": '" << line << "'";
  throw ParseError(msg.str());
}

}  // namespace

GpuUsageMap parse_compute_apps_csv(std::string_view text) {
  GpuUsageMap usage;
  bool header_seen = false;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;

    const auto line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) bad_line(number, line, "expected 'pid, used_memory'");
    const auto pid_text = trim(line.substr(0, comma));
    auto mem_text = trim(line.substr(comma + 1));
    if (mem_text.size() >= 3 && mem_text.substr(mem_text.size() - 3) == "MiB") {
      mem_text = trim(mem_text.substr(0, mem_text.size() - 3));
    }

    const auto pid = parse_whole<pid_t>(pid_text);
    if (!pid || *pid <= 0) bad_line(number, line, "invalid pid");
    const auto mem = parse_whole<GpuBytes>(mem_text);
    if (!mem) bad_line(number, line, "invalid used memory");

    usage[ProcessId(*pid)] += *mem * kBytesPerReportedUnit;
  }
  return usage;
}

GpuSnapshot snapshot_gpu(ProcessId target, std::span<const ProcessId> descendants,
                         const GpuUsageMap& usage) {
  GpuSnapshot snap;
  if (auto it = usage.find(target); it != usage.end()) snap.main = it->second;
  for (const auto& pid : descendants) {
    if (auto it = usage.find(pid); it != usage.end()) snap.descendents += it->second;
  }
  snap.combined = snap.main + snap.descendents;
  return snap;
}

NvidiaSmiBackend::NvidiaSmiBackend(NvidiaSmiOptions options) : options_(std::move(options)) {}

void NvidiaSmiBackend::latch(std::string message) {
  std::lock_guard lock(mutex_);
  if (!note_) note_ = std::move(message);
}

std::optional<std::string> NvidiaSmiBackend::note() const {
  std::lock_guard lock(mutex_);
  return note_;
}

GpuUsageMap NvidiaSmiBackend::query() {
  {
    std::lock_guard lock(mutex_);
    if (tool_missing_) return {};
  }
  const auto run = run_capture(
      {options_.executable, "--query-compute-apps=pid,used_memory", "--format=csv"},
      options_.timeout);
  if (!run.launched) {
    {
      std::lock_guard lock(mutex_);
      tool_missing_ = true;
    }
    latch("GPU unavailable: " + options_.executable +
          " could not be run; GPU RAM is reported as 0");
    return {};
  }
  if (run.timed_out) {
    latch("GPU query timed out after " + std::to_string(options_.timeout.count()) +
          " ms; GPU RAM may be under-reported");
    return {};
  }
  if (run.exit_code != 0) {
    latch("GPU unavailable: " + options_.executable + " exited with status " +
          std::to_string(run.exit_code) + "; GPU RAM is reported as 0");
    return {};
  }
  return parse_compute_apps_csv(run.output);
}

ReplayGpuBackend::ReplayGpuBackend(std::vector<std::string> fixtures)
    : fixtures_(std::move(fixtures)) {}

std::vector<std::string> load_gpu_fixtures(std::span<const std::filesystem::path> paths) {
  std::vector<std::string> fixtures;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read GPU fixture " + path.string());
    std::ostringstream content;
    content << in.rdbuf();
    fixtures.push_back(content.str());
  }
  return fixtures;
}

GpuUsageMap ReplayGpuBackend::query() {
  std::string fixture;
  {
    std::lock_guard lock(mutex_);
    if (fixtures_.empty()) return {};
    fixture = fixtures_[next_];
    if (next_ + 1 < fixtures_.size()) ++next_;
  }
  return parse_compute_apps_csv(fixture);
}

}  // namespace gput
