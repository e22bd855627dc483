#pragma once

namespace layerscatter {

inline constexpr const char* version = "1.0.0";

}  // namespace layerscatter
