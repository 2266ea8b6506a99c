#pragma once

namespace colobench {

inline constexpr const char* kToolName = "colobench";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace colobench
