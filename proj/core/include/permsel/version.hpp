#pragma once

namespace permsel {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace permsel
