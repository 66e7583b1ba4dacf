#pragma once

namespace tsskew {

inline constexpr const char* version = "0.1.0";

}  // namespace tsskew
