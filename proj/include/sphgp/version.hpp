#pragma once

#include <string_view>

namespace sphgp {
inline constexpr std::string_view kVersion = "0.1.0";
}
