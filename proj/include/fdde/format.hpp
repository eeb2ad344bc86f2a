#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace fdde {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace fdde
