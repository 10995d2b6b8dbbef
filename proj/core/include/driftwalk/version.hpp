#pragma once

namespace driftwalk {

inline constexpr const char* version = "0.1.0";

}
