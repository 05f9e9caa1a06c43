#pragma once

#include <charconv>
#include <string>

namespace bornforge {

// Shortest decimal string that round-trips the value (to_chars default).
inline std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace bornforge
