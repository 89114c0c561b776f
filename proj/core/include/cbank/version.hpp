#pragma once

namespace cbank {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cbank
