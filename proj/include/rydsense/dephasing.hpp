#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rydsense/quantum_core.hpp"
#include "rydsense/spectroscopy.hpp"
#include "rydsense/units.hpp"

namespace rydsense {

struct GasParams {
    double polarizability{402.0};    // a0^3, ground-state Cs
    double s_wave_length{-16.6};     // a0, electron-Cs(6S) singlet/triplet average
    double mass{units::cesium_mass}; // kg
    double effective_n{49.5};        // n* of the Rydberg level (52D5/2)
};

void validate(const GasParams& g);

// Saturated Cs vapor number density (m^-3) for 250 K <= T <= 400 K.
// Taylor-Langmuir correlation, rescaled so that 294 K gives 3.1e10 cm^-3.
double cs_density(double temperature);

// Unscaled Taylor-Langmuir vapor pressure (Pa).
double cs_vapor_pressure(double temperature);

inline constexpr double reference_temperature = 294.0;   // K
inline constexpr double reference_density = 3.1e16;      // m^-3

double mean_speed(double temperature, double mass);           // sqrt(8kT/(pi m))
double mean_relative_speed(double temperature, double mass);  // sqrt(2) * mean speed
double rms_speed(double temperature, double mass);            // sqrt(3kT/m)

enum class SpeedConvention { mean, mean_relative, rms };

double speed(SpeedConvention c, double temperature, double mass);

// Collision coefficients Gamma/rho in cm^3 MHz (ordinary frequency, FWHM).
double elastic_coefficient(const GasParams& gas, double temperature,
                           SpeedConvention convention = SpeedConvention::mean_relative);
double inelastic_coefficient(const GasParams& gas);

// FWHM collision broadening in rad/s.
double elastic_collision_rate(double density, const GasParams& gas, double temperature,
                              SpeedConvention convention = SpeedConvention::mean_relative);
double inelastic_collision_rate(double density, const GasParams& gas);
double collisional_rate(double density, const GasParams& gas, double temperature);

// sigma = Gamma / (v rho); rate_per_density in cm^3 MHz, speed in m/s, result in cm^2.
double collision_cross_section(double rate_per_density, double speed);

// Dimensionless factor multiplying sqrt(2) v / d, fitted once to the three
// (beam diameter, transit rate) pairs 0.32 mm / 94 kHz, 0.5 mm / 60 kHz and
// 1.1 mm / 27 kHz at 294 K.
inline constexpr double transit_constant = 0.09777941415280691;

// Log-space least-squares fit of c in rate = c sqrt(2) v / d.
// pairs: (diameter m, rate Hz).
double calibrate_transit_constant(const std::vector<std::pair<double, double>>& pairs, double temperature,
                                  double mass);

// rad/s
double transit_broadening(double beam_diameter, double temperature, double mass,
                          double constant = transit_constant);

struct BudgetOverrides {
    std::optional<double> transit;       // rad/s
    std::optional<double> collisional;
    double laser{units::angular(70e3)};
    double magnetic{units::angular(50e3)};
    double rydberg_rydberg{0.0};
};

// Transit from the smaller beam, collisions from the cell density; explicit
// overrides replace the computed values.
DephasingBudget assemble_budget(const CellConditions& conditions, const GasParams& gas,
                                const BudgetOverrides& overrides = {});

}  // namespace rydsense
