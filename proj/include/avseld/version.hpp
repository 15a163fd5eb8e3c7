#pragma once

namespace avseld {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace avseld
