#include "diffusefield/csv.hpp"

#include <cmath>
#include <cstdio>

namespace diffusefield {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace diffusefield
