#pragma once

namespace photex {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace photex
