#pragma once

namespace helikon {
inline constexpr const char* version = "0.1.0";
}
