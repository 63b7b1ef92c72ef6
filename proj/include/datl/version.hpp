#pragma once

namespace datl {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace datl
