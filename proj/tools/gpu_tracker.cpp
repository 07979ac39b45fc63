#include <iostream>
#include <string>
#include <vector>

#include "gput/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto parsed = gput::cli::parse_args(args);
  if (!parsed.options) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message;
    return parsed.exit_code;
  }
  return gput::cli::run_command(*parsed.options, std::cout, std::cerr);
}
