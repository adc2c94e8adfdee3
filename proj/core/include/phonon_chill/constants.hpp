#pragma once

// SI constants (CODATA 2018) used by the unit conversions.

namespace phonon_chill::si {

inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J / K
inline constexpr double kBohrMagneton = 9.2740100783e-24; // J / T
inline constexpr double kElectronG = 2.0;
inline constexpr double kDiamondDensity = 3500.0;         // kg / m^3
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace phonon_chill::si
