#pragma once

namespace quasient {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace quasient
