#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace wpt {

// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  if (r.ec != std::errc{}) return "nan";
  return std::string(buf, r.ptr);
}

}  // namespace wpt
