#pragma once

#include <numbers>

// Gaussian-CGS, CODATA 2018.
namespace densebeam::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-27;     // erg s
inline constexpr double c_light = 2.99792458e10;    // cm / s
inline constexpr double statcoulomb_per_coulomb = 2.99792458e9;

// Relative distance from a density-dependent denominator to zero below which
// evaluation is refused.
inline constexpr double pole_epsilon = 1e-12;

}  // namespace densebeam::constants
