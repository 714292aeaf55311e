#pragma once

namespace spadaac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spadaac
