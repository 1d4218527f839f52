#pragma once

namespace diracbs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace diracbs
