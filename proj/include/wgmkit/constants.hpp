#pragma once

namespace wgm {

// SI defining constants and CODATA 2018 values.
inline constexpr double kSpeedOfLight = 299792458.0;            // m/s, exact
inline constexpr double kPlanck = 6.62607015e-34;               // J s, exact
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kVacuumPermeability = 1.25663706212e-6; // H/m
inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace wgm
