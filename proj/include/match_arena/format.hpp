#pragma once

#include <cstdio>
#include <string>

namespace match_arena {

/// Fixed CSV number format: 12 significant digits, "%.12g".
inline std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace match_arena
