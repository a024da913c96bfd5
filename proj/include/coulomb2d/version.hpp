#pragma once

namespace coulomb2d {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace coulomb2d
