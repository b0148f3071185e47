#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace malvis {

/// Fixed-point rendering with `decimals` places; values that round to zero print unsigned.
inline std::string fixed(double v, int decimals) {
  if (std::fabs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace malvis
