#pragma once

#include <cstdio>
#include <string>

namespace lmgeo {

/// Shortest-stable text for a double: 17 significant digits.
[[nodiscard]] inline std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace lmgeo
