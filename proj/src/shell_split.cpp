#include "gput/shell_split.hpp"

#include <optional>

#include "gput/errors.hpp"

namespace gput {

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> words;
  std::optional<std::string> word;
  char quote = 0;

  for (std::size_t i = 0; i < command.size(); ++i) {
    const char c = command[i];
    if (quote == '\'') {
      if (c == '\'') {
        quote = 0;
      } else {
        *word += c;
      }
      continue;
    }
    if (quote == '"') {
      if (c == '"') {
        quote = 0;
      } else if (c == '\\' && i + 1 < command.size() &&
                 std::string_view("\\\"$`\n").find(command[i + 1]) != std::string_view::npos) {
        if (command[++i] != '\n') *word += command[i];
      } else {
        *word += c;
      }
      continue;
    }

    switch (c) {
      case ' ':
      case '\t':
      case '\n':
        if (word) words.push_back(std::move(*word));
        word.reset();
        break;
      case '\'':
      case '"':
        quote = c;
        if (!word) word.emplace();
        break;
      case '\\':
        if (i + 1 == command.size()) throw ConfigError("command ends with a dangling backslash");
        ++i;
        if (command[i] == '\n') break;  // line continuation
        if (!word) word.emplace();
        *word += command[i];
        break;
      default:
        if (!word) word.emplace();
        *word += c;
    }
  }

  if (quote) throw ConfigError(std::string("unterminated ") + quote + " quote in command");
  if (word) words.push_back(std::move(*word));
  return words;
}

}  // namespace gput
