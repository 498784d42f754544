#pragma once

namespace ngstate {

inline constexpr const char* version = "1.0.0";

}  // namespace ngstate
