#pragma once

#include <cstdio>
#include <string>

namespace perfectmap::detail {

// Shortest decimal literal that parses back to the exact same double, so
// serialize/parse round trips are bit identical.
inline std::string format_double(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char s[48];
    std::snprintf(s, sizeof(s), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(s, "%lf", &back);
    if (back == v) return s;
  }
  char s[48];
  std::snprintf(s, sizeof(s), "%.17g", v);
  return s;
}

}  // namespace perfectmap::detail
