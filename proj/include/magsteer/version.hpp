#pragma once

namespace magsteer {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace magsteer
