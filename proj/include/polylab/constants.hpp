#pragma once

#include <cmath>
#include <numbers>

namespace polylab {

/// Limiting ground-state energy arcsinh(1) = log(1 + sqrt(2)).
inline const double kGroundEnergy = std::log1p(std::numbers::sqrt2);

/// Limiting normalized length of optimal polymers, sqrt(2) * arcsinh(1).
inline const double kOptimalLength = std::numbers::sqrt2 * kGroundEnergy;

}  // namespace polylab
