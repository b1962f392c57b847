// version.hpp — Library version string

#pragma once

namespace metastab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace metastab
