#pragma once

namespace imbalance {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace imbalance
