#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace dandelion {

/// Shortest decimal string that parses back to the same double; locale-independent.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

}  // namespace dandelion
