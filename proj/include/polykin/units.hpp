#pragma once

#include <string_view>

namespace polykin {

/// Boltzmann constant [J/K] (exact, 2019 SI).
inline constexpr double kBoltzmannSI = 1.380649e-23;

/// Unit system in use. SI carries the physical Boltzmann constant; the
/// nondimensional mode sets k_B = 1 (and is normally used with m = 1).
struct Units {
    double kB = kBoltzmannSI;

    static constexpr Units si() { return {kBoltzmannSI}; }
    static constexpr Units nondimensional() { return {1.0}; }
};

}  // namespace polykin
