#pragma once

#include <numbers>

// SI constants (CODATA 2018 exact/recommended values) and the unit
// conversions used by material presets. Everything public is SI.
namespace casimir::si {

inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double c = 2.99792458e8;         // m/s
inline constexpr double k_B = 1.380649e-23;       // J/K
inline constexpr double hbar_c = hbar * c;        // J m

/// Angular frequency of 1 eV, rounded as in the Drude parameter literature.
inline constexpr double rad_per_s_per_eV = 1.519e15;

inline constexpr double eV(double v) { return v * rad_per_s_per_eV; }
inline constexpr double meV(double v) { return v * 1e-3 * rad_per_s_per_eV; }

inline constexpr double nm(double v) { return v * 1e-9; }
inline constexpr double um(double v) { return v * 1e-6; }

inline constexpr double pi = std::numbers::pi;

}  // namespace casimir::si
