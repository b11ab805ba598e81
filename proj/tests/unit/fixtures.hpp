#pragma once

#include <cmath>
#include <string>

#include "czband/types.hpp"

namespace fixtures {

// Lattices of the two reference configurations, in SI units.
inline czband::LatticeSpec strong() { return {960e-9, 3.53, 4e-6, 0.65, 0.02}; }
inline czband::LatticeSpec weak() { return {960e-9, 3.53, 4e-6, 0.65, 1e-4}; }
inline czband::LatticeSpec empty() { return {960e-9, 3.53, 4e-6, 0.65, 0.0}; }

inline std::string data(const std::string& name) { return std::string(CZBAND_TEST_DATA) + "/" + name; }

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference constants typed in independently of the library table.
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kC = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace fixtures
