#include "gput/report.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gput/errors.hpp"

namespace gput {

using Json = nlohmann::ordered_json;

ReportFormat parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::kText;
  if (text == "json") return ReportFormat::kJson;
  throw ConfigError("invalid format '" + std::string(text) + "'; must be one of 'text', 'json'");
}

std::string format_rounded(double value) {
  std::array<char, 512> buf{};
  // Fixed-precision conversion is correctly rounded from the binary value,
  // ties to even.
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 3);
  double rounded = 0.0;
  std::from_chars(buf.data(), res.ptr, rounded);
  if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0.0

  res = std::to_chars(buf.data(), buf.data() + buf.size(), rounded, std::chars_format::fixed);
  std::string text(buf.data(), res.ptr);
  if (text.find('.') == std::string::npos) text += ".0";
  return text;
}

namespace {

class TextWriter {
 public:
  void line(int depth, std::string_view text) {
    if (!first_) out_ << '\n';
    first_ = false;
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text;
  }

  void value(int depth, std::string_view label, double v) {
    line(depth, std::string(label) + ": " + format_rounded(v));
  }

  void rss(int depth, std::string_view label, const ScaledRss& values) {
    line(depth, std::string(label) + ":");
    value(depth + 1, "Total RSS", values.total_rss);
    value(depth + 1, "Private RSS", values.private_rss);
    value(depth + 1, "Shared RSS", values.shared_rss);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

Json rss_json(const ScaledRss& values) {
  Json j;
  j["total_rss"] = values.total_rss;
  j["private_rss"] = values.private_rss;
  j["shared_rss"] = values.shared_rss;
  return j;
}

}  // namespace

std::string render_text(const TrackingResults& results) {
  TextWriter w;
  const auto& ram = results.max_ram;
  w.line(0, "Max RAM:");
  w.line(1, "Unit: " + std::string(to_string(ram.unit)));
  w.value(1, "System capacity", ram.system_capacity);
  w.value(1, "System", ram.system);
  w.rss(1, "Main", ram.main);
  w.rss(1, "Descendents", ram.descendents);
  w.rss(1, "Combined", ram.combined);

  const auto& gpu = results.max_gpu_ram;
  w.line(0, "Max GPU RAM:");
  w.line(1, "Unit: " + std::string(to_string(gpu.unit)));
  w.value(1, "Main", gpu.main);
  w.value(1, "Descendents", gpu.descendents);
  w.value(1, "Combined", gpu.combined);

  w.line(0, "Compute time:");
  w.line(1, "Unit: " + std::string(to_string(results.compute_time.unit)));
  w.value(1, "Time", results.compute_time.time);

  if (!results.notes.empty()) {
    w.line(0, "Notes:");
    for (const auto& note : results.notes) w.line(1, note);
  }
  return w.str();
}

std::string render_json(const TrackingResults& results) {
  Json doc;
  const auto& ram = results.max_ram;
  Json& max_ram = doc["max_ram"];
  max_ram["unit"] = to_string(ram.unit);
  max_ram["system_capacity"] = ram.system_capacity;
  max_ram["system"] = ram.system;
  max_ram["main"] = rss_json(ram.main);
  max_ram["descendents"] = rss_json(ram.descendents);
  max_ram["combined"] = rss_json(ram.combined);

  const auto& gpu = results.max_gpu_ram;
  Json& max_gpu = doc["max_gpu_ram"];
  max_gpu["unit"] = to_string(gpu.unit);
  max_gpu["main"] = gpu.main;
  max_gpu["descendents"] = gpu.descendents;
  max_gpu["combined"] = gpu.combined;

  Json& time = doc["compute_time"];
  time["unit"] = to_string(results.compute_time.unit);
  time["time"] = results.compute_time.time;

  if (!results.notes.empty()) doc["notes"] = results.notes;
  return doc.dump(2);
}

std::string render(const TrackingResults& results, ReportFormat format) {
  return format == ReportFormat::kJson ? render_json(results) : render_text(results);
}

namespace {

ScaledRss rss_from(const Json& j) {
  return {j.at("total_rss").get<double>(), j.at("private_rss").get<double>(),
          j.at("shared_rss").get<double>()};
}

}  // namespace

TrackingResults parse_json_report(std::string_view document) {
  try {
    const auto doc = Json::parse(document);
    TrackingResults results;

    const auto& ram = doc.at("max_ram");
    results.max_ram.unit = parse_ram_unit(ram.at("unit").get<std::string>(), "max_ram.unit");
    results.max_ram.system_capacity = ram.at("system_capacity").get<double>();
    results.max_ram.system = ram.at("system").get<double>();
    results.max_ram.main = rss_from(ram.at("main"));
    results.max_ram.descendents = rss_from(ram.at("descendents"));
    results.max_ram.combined = rss_from(ram.at("combined"));

    const auto& gpu = doc.at("max_gpu_ram");
    results.max_gpu_ram.unit = parse_ram_unit(gpu.at("unit").get<std::string>(), "max_gpu_ram.unit");
    results.max_gpu_ram.main = gpu.at("main").get<double>();
    results.max_gpu_ram.descendents = gpu.at("descendents").get<double>();
    results.max_gpu_ram.combined = gpu.at("combined").get<double>();

    const auto& time = doc.at("compute_time");
    results.compute_time.unit = parse_time_unit(time.at("unit").get<std::string>(), "compute_time.unit");
    results.compute_time.time = time.at("time").get<double>();

    if (doc.contains("notes")) results.notes = doc.at("notes").get<std::vector<std::string>>();
    return results;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  } catch (const UnitError& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace gput
