#pragma once

namespace ergopt {
inline constexpr const char* kVersion = "0.1.0";
}
