#pragma once

namespace spdelab {
inline constexpr const char* kVersion = "0.1.0";
}
