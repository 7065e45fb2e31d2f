#pragma once

namespace perihyp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace perihyp
