#include "gput/cli.hpp"

#include <signal.h>
#include <sys/types.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <system_error>

#include <CLI11.hpp>

#include "gput/errors.hpp"
#include "gput/shell_split.hpp"
#include "gput/subprocess.hpp"

namespace gput::cli {

namespace {

constexpr const char* kDescription =
    "Tracks the peak RAM, peak GPU RAM and wall-clock time of a shell command\n"
    "and all of the processes it starts.\n";

constexpr const char* kUsage =
    "Usage:\n"
    "  gpu-tracker --execute=<command> [--output=<output>] [--format=<format>] "
    "[--st=<sleep-time>] [--ru=<ram-unit>] [--gru=<gpu-ram-unit>] [--tu=<time-unit>]";

struct RawFlags {
  std::string execute;
  std::string output;
  std::string format = "text";
  std::optional<double> sleep_time;
  std::optional<std::string> ram_unit;
  std::optional<std::string> gpu_ram_unit;
  std::optional<std::string> time_unit;
};

void build_app(CLI::App& app, RawFlags& flags) {
  app.description(kDescription);
  app.usage(kUsage);
  app.set_help_flag("-h,--help", "Show this help message and exit.");
  app.add_option("-e,--execute", flags.execute,
                 "Command to run, with its arguments, as one quoted string, e.g. \"ls -l -a\".")
      ->option_text("<command>")
      ->required();
  app.add_option("-o,--output", flags.output,
                 "Write the measurements to this file instead of the screen.")
      ->option_text("<output>");
  app.add_option("-f,--format", flags.format, "Report format: 'text' (default) or 'json'.")
      ->option_text("<format>");
  app.add_option("--st", flags.sleep_time, "Seconds to sleep between usage samples.")
      ->option_text("<sleep-time>");
  app.add_option("--ru", flags.ram_unit,
                 "RAM unit: 'bytes', 'kilobytes', 'megabytes', 'gigabytes' or 'terabytes'.")
      ->option_text("<ram-unit>");
  app.add_option("--gru", flags.gpu_ram_unit,
                 "GPU RAM unit: 'bytes', 'kilobytes', 'megabytes', 'gigabytes' or 'terabytes'.")
      ->option_text("<gpu-ram-unit>");
  app.add_option("--tu", flags.time_unit, "Time unit: 'seconds', 'minutes', 'hours' or 'days'.")
      ->option_text("<time-unit>");
}

ParseOutcome usage_error(const std::string& what) {
  return {std::nullopt, kUsageError, "gpu-tracker: " + what + "\nRun with --help for more information.\n"};
}

std::atomic<pid_t> g_child{0};

extern "C" void forward_signal(int sig) {
  const pid_t child = g_child.load();
  if (child > 0) ::kill(child, sig);
}

// Forwards SIGINT/SIGTERM to the tracked child for its lifetime so the CLI
// still reaps it, stops the tracker and reports.
class SignalForwarder {
 public:
  SignalForwarder() {
    struct sigaction action {};
    action.sa_handler = forward_signal;
    sigemptyset(&action.sa_mask);
    ::sigaction(SIGINT, &action, &old_int_);
    ::sigaction(SIGTERM, &action, &old_term_);
  }
  ~SignalForwarder() {
    g_child.store(0);
    ::sigaction(SIGINT, &old_int_, nullptr);
    ::sigaction(SIGTERM, &old_term_, nullptr);
  }
  SignalForwarder(const SignalForwarder&) = delete;
  SignalForwarder& operator=(const SignalForwarder&) = delete;

  void watch(pid_t child) { g_child.store(child); }

 private:
  struct sigaction old_int_ {};
  struct sigaction old_term_ {};
};

}  // namespace

std::string help_text() {
  CLI::App app;
  RawFlags flags;
  build_app(app, flags);
  app.name("gpu-tracker");
  return app.help();
}

ParseOutcome parse_args(const std::vector<std::string>& args) {
  CLI::App app;
  RawFlags flags;
  build_app(app, flags);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& arg : args) argv.push_back(arg.c_str());
  if (!args.empty()) app.name("gpu-tracker");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, 0, app.help()};
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  CliOptions opts;
  opts.execute = flags.execute;
  if (opts.execute.find_first_not_of(" \t\n") == std::string::npos) {
    return usage_error("--execute must name a command");
  }
  if (!flags.output.empty()) opts.output = flags.output;

  try {
    opts.format = parse_report_format(flags.format);
    if (flags.sleep_time) opts.tracker.sleep_time = *flags.sleep_time;
    if (flags.ram_unit) opts.tracker.ram_unit = parse_ram_unit(*flags.ram_unit, "--ru");
    if (flags.gpu_ram_unit) opts.tracker.gpu_ram_unit = parse_ram_unit(*flags.gpu_ram_unit, "--gru");
    if (flags.time_unit) opts.tracker.time_unit = parse_time_unit(*flags.time_unit, "--tu");
    if (flags.sleep_time && !(*flags.sleep_time > 0.0 && std::isfinite(*flags.sleep_time))) {
      throw ConfigError("--st must be a positive number of seconds");
    }
    validate(opts.tracker);
  } catch (const ConfigError& e) {
    return usage_error(e.what());
  }
  return {std::move(opts), 0, {}};
}

int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::string> words;
  try {
    words = split_command(opts.execute);
  } catch (const ConfigError& e) {
    err << "gpu-tracker: " << e.what() << '\n';
    return kUsageError;
  }
  if (words.empty()) {
    err << "gpu-tracker: --execute must name a command\n";
    return kUsageError;
  }

  out.flush();
  std::cout.flush();
  SignalForwarder forwarder;
  pid_t child = 0;
  try {
    child = spawn_inherit(words);
  } catch (const std::system_error& e) {
    err << "gpu-tracker: cannot run '" << words.front() << "': " << e.code().message() << '\n';
    return kSpawnFailure;
  }
  forwarder.watch(child);

  auto config = opts.tracker;
  config.process_id = ProcessId(child);
  Tracker tracker(config);
  tracker.start();
  const int code = wait_exit_code(child);
  const auto results = tracker.stop();

  out << "Resource tracking complete. Process completed with status code: " << code << '\n';
  const auto report = render(results, opts.format) + '\n';
  if (!opts.output) {
    out << report;
    out.flush();
    return code;
  }

  std::ofstream file(*opts.output, std::ios::binary | std::ios::trunc);
  if (file) file << report;
  if (file) file.close();
  if (!file) {
    err << "gpu-tracker: cannot write '" << opts.output->string()
        << "'; printing the report instead\n";
    out << report;
    out.flush();
    return code != 0 ? code : 1;
  }
  out.flush();
  return code;
}

}  // namespace gput::cli
