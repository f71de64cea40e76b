#pragma once

namespace beaconseg {

inline constexpr const char* VERSION = "1.0.0";

} // namespace beaconseg
