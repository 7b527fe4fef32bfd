#pragma once

namespace fracp {
inline constexpr const char* kVersion = "0.1.0";
}
