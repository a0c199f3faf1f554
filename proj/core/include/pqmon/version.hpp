#pragma once

namespace pqmon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pqmon
