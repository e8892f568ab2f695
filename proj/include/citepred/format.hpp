#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace citepred {

// Twelve significant digits, the fixed precision of every text dump.
inline std::string format_decimal(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// Ordered key/value pairs describing the settings an output was produced
// with. Text outputs carry them as leading "# key=value" lines.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline void write_echo(std::ostream& out, const ConfigEcho& echo) {
  for (const auto& [key, value] : echo) out << "# " << key << '=' << value << '\n';
}

}  // namespace citepred
