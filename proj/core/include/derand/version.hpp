#pragma once

namespace derand {

inline constexpr const char* kToolName = "derand-lab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace derand
