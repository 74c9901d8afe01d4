#pragma once

#include <charconv>
#include <string>

namespace trajscore {

/// Shortest round-trip decimal form, the canonical number format of all
/// emitted CSV and JSON.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace trajscore
