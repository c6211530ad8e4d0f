#include "rydsense/dephasing.hpp"

#include <algorithm>
#include <cmath>

#include "rydsense/errors.hpp"

namespace rydsense {

namespace {

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be positive");
}

void check_nonneg(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be >= 0");
}

constexpr double cm3_mhz = 1e-6 * 1e6;  // cm^3 MHz -> m^3 Hz

}  // namespace

void validate(const GasParams& g) {
    check_positive(g.polarizability, "polarizability");
    check_positive(g.mass, "mass");
    if (!std::isfinite(g.s_wave_length)) throw ValidationError("scattering length must be finite");
    if (!(g.effective_n > 1.0) || !std::isfinite(g.effective_n)) throw ValidationError("effective n must exceed 1");
}

double cs_vapor_pressure(double temperature) {
    if (!(temperature >= 250.0 && temperature <= 400.0))
        throw RangeError("Cs vapor correlation is valid for 250 K to 400 K");
    const double log10_torr = 11.0531 - 1.35 * std::log10(temperature) - 4041.0 / temperature;
    return std::pow(10.0, log10_torr) * units::torr;
}

double cs_density(double temperature) {
    static const double calibration =
        reference_density / (cs_vapor_pressure(reference_temperature) / (units::boltzmann * reference_temperature));
    return calibration * cs_vapor_pressure(temperature) / (units::boltzmann * temperature);
}

double mean_speed(double temperature, double mass) {
    check_positive(temperature, "temperature");
    check_positive(mass, "mass");
    return std::sqrt(8.0 * units::boltzmann * temperature / (units::pi * mass));
}

double mean_relative_speed(double temperature, double mass) { return std::sqrt(2.0) * mean_speed(temperature, mass); }

double rms_speed(double temperature, double mass) {
    check_positive(temperature, "temperature");
    check_positive(mass, "mass");
    return std::sqrt(3.0 * units::boltzmann * temperature / mass);
}

double speed(SpeedConvention c, double temperature, double mass) {
    switch (c) {
        case SpeedConvention::mean: return mean_speed(temperature, mass);
        case SpeedConvention::rms: return rms_speed(temperature, mass);
        case SpeedConvention::mean_relative:
        default: return mean_relative_speed(temperature, mass);
    }
}

double elastic_coefficient(const GasParams& gas, double temperature, SpeedConvention convention) {
    validate(gas);
    // 7.18 (alpha^2 v)^(1/3) in atomic units; rho in a0^-3
    const double v_au = speed(convention, temperature, gas.mass) / units::au_velocity;
    const double per_a0_cubed = 7.18 * std::cbrt(gas.polarizability * gas.polarizability * v_au);
    const double a0_cm = units::bohr_radius * 100.0;
    const double hz_cm3 = per_a0_cubed * units::au_frequency * a0_cm * a0_cm * a0_cm;
    return hz_cm3 * 1e-6;
}

double inelastic_coefficient(const GasParams& gas) {
    validate(gas);
    const double e2 = units::elementary_charge * units::elementary_charge / (4.0 * units::pi * units::epsilon0);
    const double as = gas.s_wave_length * units::bohr_radius;
    const double m3_hz = 8.0 * e2 * as * as / (units::planck * gas.effective_n);
    return m3_hz / cm3_mhz;
}

double elastic_collision_rate(double density, const GasParams& gas, double temperature, SpeedConvention convention) {
    check_nonneg(density, "density");
    return units::angular(elastic_coefficient(gas, temperature, convention) * cm3_mhz * density);
}

double inelastic_collision_rate(double density, const GasParams& gas) {
    check_nonneg(density, "density");
    return units::angular(inelastic_coefficient(gas) * cm3_mhz * density);
}

double collisional_rate(double density, const GasParams& gas, double temperature) {
    return elastic_collision_rate(density, gas, temperature) + inelastic_collision_rate(density, gas);
}

double collision_cross_section(double rate_per_density, double speed) {
    check_positive(rate_per_density, "rate per density");
    check_positive(speed, "speed");
    return rate_per_density * 1e6 / (speed * 100.0);
}

double calibrate_transit_constant(const std::vector<std::pair<double, double>>& pairs, double temperature,
                                  double mass) {
    if (pairs.empty()) throw ValidationError("need at least one (diameter, rate) pair");
    const double v = std::sqrt(2.0) * mean_speed(temperature, mass);
    double acc = 0.0;
    for (const auto& [d, rate] : pairs) {
        check_positive(d, "beam diameter");
        check_positive(rate, "transit rate");
        acc += std::log(rate * d / v);
    }
    return std::exp(acc / static_cast<double>(pairs.size()));
}

double transit_broadening(double beam_diameter, double temperature, double mass, double constant) {
    check_positive(beam_diameter, "beam diameter");
    check_positive(constant, "transit constant");
    return units::angular(constant * std::sqrt(2.0) * mean_speed(temperature, mass) / beam_diameter);
}

DephasingBudget assemble_budget(const CellConditions& conditions, const GasParams& gas,
                                const BudgetOverrides& overrides) {
    validate(conditions);
    validate(gas);
    for (double r : {overrides.laser, overrides.magnetic, overrides.rydberg_rydberg}) check_nonneg(r, "dephasing rate");
    DephasingBudget b;
    const double d = std::min(conditions.probe_diameter, conditions.coupling_diameter);
    b.transit = overrides.transit ? *overrides.transit : transit_broadening(d, conditions.temperature, gas.mass);
    b.collisional = overrides.collisional ? *overrides.collisional
                                          : collisional_rate(conditions.density, gas, conditions.temperature);
    check_nonneg(b.transit, "transit rate");
    check_nonneg(b.collisional, "collisional rate");
    b.laser = overrides.laser;
    b.magnetic = overrides.magnetic;
    b.rydberg_rydberg = overrides.rydberg_rydberg;
    return b;
}

}  // namespace rydsense
