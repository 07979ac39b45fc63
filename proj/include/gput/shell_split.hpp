#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gput {

/// POSIX-shell style word splitting without expansion: blanks separate
/// words, '...' is literal, "..." honours \\ \" \$ \` escapes, and a
/// backslash outside quotes escapes the next character.
/// Throws ConfigError on an unterminated quote or trailing backslash.
std::vector<std::string> split_command(std::string_view command);

}  // namespace gput
