#pragma once

// CSV helpers: comma separated, one header row, LF line endings and nine
// significant digits, independent of the global locale.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace ngstate::io {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void write_header(std::ostream& os, std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto name : names) {
    if (!first) os << ',';
    os << name;
    first = false;
  }
  os << '\n';
}

inline void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_number(v);
    first = false;
  }
  os << '\n';
}

inline void write_header(std::ostream& os, std::span<const std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
}

inline void write_row(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_number(values[i]);
  os << '\n';
}

}  // namespace ngstate::io
