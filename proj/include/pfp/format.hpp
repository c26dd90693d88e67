#pragma once

#include <charconv>
#include <cstdlib>
#include <string>

namespace pfp::format {

// Shortest decimal that parses back to the same 32-bit float.
inline std::string shortest(float value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// Shortest decimal that parses back to the same double.
inline std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// The double a JSON writer should carry for a float component: the float's
// shortest decimal read as a double, unless that double would round to a
// different float, in which case the exact widened value.
inline double json_safe(float value) {
  const auto s = shortest(value);
  const double d = std::strtod(s.c_str(), nullptr);
  return static_cast<float>(d) == value ? d : static_cast<double>(value);
}

}  // namespace pfp::format
