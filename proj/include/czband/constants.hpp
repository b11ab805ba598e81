#pragma once

#include <numbers>

namespace czband::constants {

/// CODATA 2018 reduced Planck constant, J*s.
inline constexpr double hbar = 1.054571817e-34;
/// Speed of light in vacuum, m/s.
inline constexpr double c = 2.99792458e8;
inline constexpr double pi = std::numbers::pi;

}  // namespace czband::constants
