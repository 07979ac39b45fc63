#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "gput/errors.hpp"
#include "gput/report.hpp"
#include "support/test_support.hpp"
#include "support/tutorial_results.hpp"

using namespace gput;

namespace {

std::string fixture(const std::string& name) {
  return testing::read_file(std::string(GPUT_FIXTURE_DIR) + "/" + name);
}

// Line reader for the text layout: "a.b.c" path -> value string.
std::map<std::string, std::string> read_text_report(const std::string& text) {
  std::map<std::string, std::string> fields;
  std::vector<std::string> path;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto indent = line.find_first_not_of(' ');
    const auto depth = indent / 2;
    const auto body = line.substr(indent);
    path.resize(depth);
    const auto colon = body.find(':');
    const auto key = body.substr(0, colon);
    const auto value = colon + 1 < body.size() ? body.substr(colon + 2) : std::string{};
    if (value.empty()) {
      path.push_back(key);
      continue;
    }
    std::string full;
    for (const auto& p : path) full += p + ".";
    fields[full + key] = value;
  }
  return fields;
}

TrackingResults random_results(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.0, 1e6);
  std::uniform_int_distribution<int> pick(0, 4);
  TrackingResults r;
  r.max_ram.unit = static_cast<RamUnit>(pick(rng));
  r.max_ram.system_capacity = mag(rng);
  r.max_ram.system = mag(rng);
  for (auto* rss : {&r.max_ram.main, &r.max_ram.descendents, &r.max_ram.combined}) {
    rss->private_rss = mag(rng);
    rss->shared_rss = mag(rng);
    rss->total_rss = rss->private_rss + rss->shared_rss;
  }
  r.max_gpu_ram = {static_cast<RamUnit>(pick(rng)), mag(rng), mag(rng), 0.0};
  r.max_gpu_ram.combined = r.max_gpu_ram.main + r.max_gpu_ram.descendents;
  r.compute_time = {static_cast<TimeUnit>(pick(rng) % 4), mag(rng) / 1e3};
  if (pick(rng) == 0) r.notes = {"GPU unavailable", "something \"quoted\""};
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format_rounded keeps three decimals in shortest form") {
  CHECK(format_rounded(506.0) == "506.0");
  CHECK(format_rounded(603.5251199999999) == "603.525");
  CHECK(format_rounded(0.0009229619635476007) == "0.001");
  CHECK(format_rounded(2.767793655395508) == "2.768");
  CHECK(format_rounded(67254.165504) == "67254.166");
  CHECK(format_rounded(0.83039436800000001) == "0.83");
  CHECK(format_rounded(708.19) == "708.19");
  CHECK(format_rounded(0.0) == "0.0");
  CHECK(format_rounded(0.0004) == "0.0");
  CHECK(format_rounded(10000.0) == "10000.0");
}

TEST_CASE("format_rounded breaks exact ties to even") {
  // 0.0625 and 0.1875 are exact in binary, so these are true ties.
  CHECK(format_rounded(0.0625) == "0.062");
  CHECK(format_rounded(0.1875) == "0.188");
  CHECK(format_rounded(2.0005) == "2.001");  // 2.0005 is slightly above the tie in binary
}

TEST_CASE("text report reproduces the tutorial transcript") {
  const auto expected = fixture("tutorial_megabytes.txt");
  CHECK(render_text(testing::tutorial_megabytes_results()) + "\n" == expected);
}

TEST_CASE("json report reproduces the tutorial transcript byte for byte") {
  const auto expected = fixture("tutorial_megabytes.json");
  CHECK(render_json(testing::tutorial_megabytes_results()) + "\n" == expected);
}

TEST_CASE("scaled byte peaks render the tutorial report") {
  TrackerConfig config;
  config.ram_unit = RamUnit::kMegabytes;
  config.gpu_ram_unit = RamUnit::kMegabytes;
  config.time_unit = TimeUnit::kSeconds;
  const auto results = scale_results(testing::tutorial_megabytes_peaks(), config, {});
  CHECK(render_json(results) + "\n" == fixture("tutorial_megabytes.json"));
}

TEST_CASE("all-zero results keep the full skeleton") {
  const TrackingResults zero;
  const auto json = render_json(zero);
  CHECK(json.find("\"unit\": \"gigabytes\"") != std::string::npos);
  CHECK(json.find("\"unit\": \"hours\"") != std::string::npos);
  CHECK(json.find("\"time\": 0.0") != std::string::npos);
  CHECK(json.find("notes") == std::string::npos);
  const auto text = render_text(zero);
  CHECK(text.find("Time: 0.0") != std::string::npos);
  CHECK(text.find("Notes") == std::string::npos);
}

TEST_CASE("notes follow the report") {
  TrackingResults r;
  r.notes = {"GPU unavailable: nvidia-smi could not be run"};
  const auto text = render_text(r);
  CHECK(text.ends_with("Notes:\n  GPU unavailable: nvidia-smi could not be run"));
  const auto json = render_json(r);
  CHECK(json.find("\"notes\": [\n    \"GPU unavailable") != std::string::npos);
  CHECK(json.rfind("\"notes\"") > json.rfind("\"compute_time\""));
}

TEST_CASE("json render/parse/render is stable") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto r = random_results(rng);
    const auto first = render_json(r);
    const auto parsed = parse_json_report(first);
    CHECK(parsed == r);
    CHECK(render_json(parsed) == first);
  }
}

TEST_CASE("text is machine-recoverable and agrees with rounded json") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto r = random_results(rng);
    const auto fields = read_text_report(render_text(r));
    CHECK(fields.at("Max RAM.Unit") == to_string(r.max_ram.unit));
    CHECK(fields.at("Max RAM.System capacity") == format_rounded(r.max_ram.system_capacity));
    CHECK(fields.at("Max RAM.Main.Total RSS") == format_rounded(r.max_ram.main.total_rss));
    CHECK(fields.at("Max RAM.Combined.Shared RSS") == format_rounded(r.max_ram.combined.shared_rss));
    CHECK(fields.at("Max GPU RAM.Descendents") == format_rounded(r.max_gpu_ram.descendents));
    CHECK(fields.at("Compute time.Time") == format_rounded(r.compute_time.time));
    // Recovered text values are the json values rounded to 3 decimals.
    const double recovered = std::stod(fields.at("Max RAM.Descendents.Private RSS"));
    CHECK(std::abs(recovered - r.max_ram.descendents.private_rss) <= 0.0005 + 1e-9);
  }
}

TEST_CASE("malformed json reports are rejected") {
  CHECK_THROWS_AS(parse_json_report("{"), ParseError);
  CHECK_THROWS_AS(parse_json_report("{}"), ParseError);
  auto json = render_json(TrackingResults{});
  json.replace(json.find("gigabytes"), 9, "gibibytes");
  CHECK_THROWS_AS(parse_json_report(json), ParseError);
}

TEST_CASE("report format vocabulary") {
  CHECK(parse_report_format("text") == ReportFormat::kText);
  CHECK(parse_report_format("json") == ReportFormat::kJson);
  CHECK_THROWS_AS(parse_report_format("csv"), ConfigError);
}

}  // TEST_SUITE
