#pragma once

namespace dscost {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace dscost
