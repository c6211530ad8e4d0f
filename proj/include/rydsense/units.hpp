#pragma once

#include <numbers>

namespace rydsense::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI 2019 exact values and CODATA 2018
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = planck / two_pi;          // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double torr = 101325.0 / 760.0;          // Pa

// atomic units of velocity and frequency
inline constexpr double au_velocity = 2.18769126364e6;     // m/s
inline constexpr double au_frequency = 4.1341373335e16;    // 1/s

inline constexpr double cesium_mass = 132.905451961 * atomic_mass_unit;  // kg

inline constexpr double per_cm3 = 1e6;  // m^-3 per cm^-3

// angular rate from ordinary frequency and back
constexpr double angular(double hz) { return two_pi * hz; }
constexpr double hertz(double rad_per_s) { return rad_per_s / two_pi; }

constexpr double wavevector(double wavelength) { return two_pi / wavelength; }

}  // namespace rydsense::units
