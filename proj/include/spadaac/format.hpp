#pragma once

#include <charconv>
#include <string>

namespace spadaac {

/// Shortest round-trip decimal representation of a double. Locale-free and
/// deterministic, which the byte-identical output guarantee relies on.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spadaac
