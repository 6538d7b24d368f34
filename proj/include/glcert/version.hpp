#pragma once

namespace glcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace glcert
