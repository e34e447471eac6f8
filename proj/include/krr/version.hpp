#pragma once

namespace krr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace krr
