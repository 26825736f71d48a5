#pragma once

namespace xcsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace xcsim
