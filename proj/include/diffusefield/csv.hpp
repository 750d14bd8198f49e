#pragma once

#include <string>

namespace diffusefield {

// Shortest round-trippable-enough text for CSV cells; "nan" for NaN.
std::string fmt_num(double v);

}  // namespace diffusefield
