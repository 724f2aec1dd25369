// version.hpp — Library version string

#pragma once

namespace triosc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace triosc
