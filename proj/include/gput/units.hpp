#pragma once

#include <cstdint>
#include <string_view>

namespace gput {

/// Decimal memory units, a factor of 1000 apart.
enum class RamUnit { kBytes, kKilobytes, kMegabytes, kGigabytes, kTerabytes };

enum class TimeUnit { kSeconds, kMinutes, kHours, kDays };

/// Throws UnitError naming `field` and the accepted values.
RamUnit parse_ram_unit(std::string_view text, std::string_view field = "ram_unit");
TimeUnit parse_time_unit(std::string_view text, std::string_view field = "time_unit");

std::string_view to_string(RamUnit unit) noexcept;
std::string_view to_string(TimeUnit unit) noexcept;

/// Bytes per one `unit`.
double ram_unit_factor(RamUnit unit) noexcept;
/// Seconds per one `unit`.
double time_unit_factor(TimeUnit unit) noexcept;

inline double convert_ram(std::uint64_t bytes, RamUnit unit) noexcept {
  return static_cast<double>(bytes) / ram_unit_factor(unit);
}

inline double convert_time(double seconds, TimeUnit unit) noexcept {
  return seconds / time_unit_factor(unit);
}

}  // namespace gput
