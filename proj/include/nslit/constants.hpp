#pragma once

// CODATA 2018 values, SI.
namespace nslit::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double planck = 2.0 * pi * hbar;        // J s
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double neutron_mass = 1.67492749804e-27; // kg
inline constexpr double standard_atmosphere = 101325.0;  // Pa
inline constexpr double mean_air_molecule_mass = 4.8e-26; // kg

}  // namespace nslit::constants
