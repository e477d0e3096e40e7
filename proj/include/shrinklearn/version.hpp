#pragma once

namespace shrinklearn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shrinklearn
