#include "gput/units.hpp"

#include <array>
#include <string>
#include <utility>

#include "gput/errors.hpp"

namespace gput {

namespace {

constexpr std::array<std::pair<std::string_view, RamUnit>, 5> kRamUnits{{
    {"bytes", RamUnit::kBytes},
    {"kilobytes", RamUnit::kKilobytes},
    {"megabytes", RamUnit::kMegabytes},
    {"gigabytes", RamUnit::kGigabytes},
    {"terabytes", RamUnit::kTerabytes},
}};

constexpr std::array<std::pair<std::string_view, TimeUnit>, 4> kTimeUnits{{
    {"seconds", TimeUnit::kSeconds},
    {"minutes", TimeUnit::kMinutes},
    {"hours", TimeUnit::kHours},
    {"days", TimeUnit::kDays},
}};

template <typename Unit, std::size_t N>
Unit lookup(const std::array<std::pair<std::string_view, Unit>, N>& table, std::string_view text,
            std::string_view field) {
  for (const auto& [name, unit] : table) {
    if (name == text) return unit;
  }
  std::string allowed;
  for (const auto& [name, unit] : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += '\'';
    allowed += name;
    allowed += '\'';
  }
  throw UnitError("invalid " + std::string(field) + " '" + std::string(text) + "'; must be one of " +
                  allowed);
}

}  // namespace

RamUnit parse_ram_unit(std::string_view text, std::string_view field) {
  return lookup(kRamUnits, text, field);
}

TimeUnit parse_time_unit(std::string_view text, std::string_view field) {
  return lookup(kTimeUnits, text, field);
}

std::string_view to_string(RamUnit unit) noexcept {
  return kRamUnits[static_cast<std::size_t>(unit)].first;
}

std::string_view to_string(TimeUnit unit) noexcept {
  return kTimeUnits[static_cast<std::size_t>(unit)].first;
}

double ram_unit_factor(RamUnit unit) noexcept {
  switch (unit) {
    case RamUnit::kBytes: return 1.0;
    case RamUnit::kKilobytes: return 1e3;
    case RamUnit::kMegabytes: return 1e6;
    case RamUnit::kGigabytes: return 1e9;
    case RamUnit::kTerabytes: return 1e12;
  }
  return 1.0;
}

double time_unit_factor(TimeUnit unit) noexcept {
  switch (unit) {
    case TimeUnit::kSeconds: return 1.0;
    case TimeUnit::kMinutes: return 60.0;
    case TimeUnit::kHours: return 3600.0;
    case TimeUnit::kDays: return 86400.0;
  }
  return 1.0;
}

}  // namespace gput
