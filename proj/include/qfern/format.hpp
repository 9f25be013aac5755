#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace qfern {

// Shortest representation that parses back to the same double. Used by the
// graph file writer so save/load round-trips exactly.
inline std::string fmt_shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// 12 significant digits; the precision used for all reported floating-point
// output (JSON, CSV, DOT labels) so golden files are stable.
inline std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

// Value rounded to 12 significant digits; applied before handing doubles to
// the JSON writer.
inline double round12(double v) {
  if (v == 0.0) return 0.0;  // normalizes -0
  return std::strtod(fmt_g12(v).c_str(), nullptr);
}

}  // namespace qfern
