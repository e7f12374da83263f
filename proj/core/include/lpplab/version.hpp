#pragma once

namespace lpplab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lpplab
