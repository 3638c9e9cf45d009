#pragma once

namespace vada {

inline constexpr const char* kVersion = "0.1.0";

} // namespace vada
