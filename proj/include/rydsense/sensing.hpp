#pragma once

#include <vector>

#include "rydsense/dephasing.hpp"
#include "rydsense/presets.hpp"
#include "rydsense/quantum_core.hpp"
#include "rydsense/spectroscopy.hpp"

namespace rydsense {

struct RfTransition {
    double dipole_moment{cs::rf_dipole_ea0};  // e a0
    double frequency{cs::rf_frequency};       // Hz

    double dipole_si() const;  // C m
};

void validate(const RfTransition& t);

// E = h dnu / mu and its inverse (Hz <-> V/m)
double at_splitting_to_field(double splitting, const RfTransition& t);
double field_to_at_splitting(double field, const RfTransition& t);

// Omega_RF = mu E / hbar (rad/s)
double rf_rabi_from_field(double field, const RfTransition& t);
double field_from_rf_rabi(double rabi, const RfTransition& t);

struct CurvePoint {
    double field{0};            // V/m
    double delta_t_percent{0};  // 100 (T_RF - T_0) / T_0
};

using WeakFieldCurve = std::vector<CurvePoint>;

// Percent change of the probe transmission at the scheme's detunings as the
// RF coupling (the single rf-kind coupling) is driven by each field.
WeakFieldCurve weak_field_curve(const LadderScheme& scheme, const DephasingBudget& budget,
                                const CellConditions& conditions, const std::vector<double>& field_grid,
                                const RfTransition& transition, const DopplerSettings& doppler = {},
                                unsigned threads = 1);

// Least-squares slope (%/(V/m)) over the smallest 20% of the field grid, at least 3 points.
double slope_at_zero(const WeakFieldCurve& curve);

// E_min sqrt(Hz) = h / (mu sqrt(T2 N)), V/m/sqrt(Hz)
double atom_shot_noise_limit(double n_atoms, double t2, const RfTransition& t);

// sqrt(eta P / (2 h nu df))
double photon_shot_noise_snr(double power, double quantum_efficiency, double bandwidth, double wavelength);

// Percent-transmission noise floor per sqrt(Hz) when the RF-induced change is
// read against a signal that is `signal_fraction` of the detected power.
double noise_floor_percent(double photon_snr, double signal_fraction);

// noise_floor (% per sqrt(Hz)) / |slope| -> V/m/sqrt(Hz)
double min_detectable_field(const WeakFieldCurve& curve, double noise_floor);

struct SensitivityReport {
    double slope_at_zero{0};         // % per V/m
    double min_detectable_field{0};  // V/m/sqrt(Hz)
    double atom_shot_limit{0};       // V/m/sqrt(Hz)
    double photon_snr{0};
};

}  // namespace rydsense
