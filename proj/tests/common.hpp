#pragma once

#include "tsskew/models.hpp"

namespace fixtures {

inline tsskew::TemperedStableParams andersen() { return {0.0088, 0.0044, 0.41, 1.93, 1.5}; }
inline tsskew::TemperedStableParams kawai() { return {0.015, 0.041, 2.318, 4.025, 1.35}; }
inline tsskew::TemperedStableParams figure3() { return {0.0040, 0.0013, 0.41, 1.93, 1.5}; }
inline tsskew::TemperedStableParams symmetric() { return {0.01, 0.01, 1.5, 2.5, 1.6}; }

}  // namespace fixtures
