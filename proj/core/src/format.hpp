#pragma once

#include <charconv>
#include <string>

namespace wordpuzzle::detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace wordpuzzle::detail
