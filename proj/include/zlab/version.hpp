#pragma once

namespace zlab {

inline constexpr const char* version = "0.1.0";

}  // namespace zlab
