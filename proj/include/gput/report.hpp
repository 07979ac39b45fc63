#pragma once

#include <string>
#include <string_view>

#include "gput/tracker.hpp"

namespace gput {

enum class ReportFormat { kText, kJson };

/// "text" or "json"; throws ConfigError otherwise.
ReportFormat parse_report_format(std::string_view text);

/// Rounds half-to-even at 3 decimals and prints the shortest form that
/// keeps one fractional digit: 506.0, 603.525, 0.001.
std::string format_rounded(double value);

/// Indented "Max RAM:" / "Max GPU RAM:" / "Compute time:" block, values
/// rounded by format_rounded. Notes, if any, follow in a "Notes:" section.
/// No trailing newline.
std::string render_text(const TrackingResults& results);

/// Two-space indented JSON with fixed key order and full precision. A
/// "notes" array is appended only when notes exist. No trailing newline.
std::string render_json(const TrackingResults& results);

std::string render(const TrackingResults& results, ReportFormat format);

/// Inverse of render_json. Throws ParseError on malformed documents.
TrackingResults parse_json_report(std::string_view document);

}  // namespace gput
