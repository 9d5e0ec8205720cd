#pragma once

namespace latkick {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latkick
