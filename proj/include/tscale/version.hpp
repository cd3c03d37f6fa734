#pragma once

namespace tscale {
inline constexpr const char* kVersion = "0.1.0";
}
