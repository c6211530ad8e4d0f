#pragma once

#include <complex>

#include "rydsense/presets.hpp"
#include "rydsense/spectroscopy.hpp"
#include "rydsense/units.hpp"

namespace rydsense {

struct PhaseNoise {
    double radians{0};     // 2 pi ds / lambda
    double fractional{0};  // ds / (2 pi lambda)
};

PhaseNoise phase_noise_floor(double stability_rms_length, double wavelength);

inline constexpr double reference_wavelength = 795e-9;  // m, MZI lock laser
inline constexpr double reference_stability = 0.4e-9;   // m rms path length

struct InterferometerConfig {
    double lo_signal_ratio{20.0};      // LO power / signal-arm power
    double splitter_ratio{0.5};        // combiner reflectivity
    double path_phase{units::pi / 2};  // LO phase; pi/2 is the balanced (dark-fringe) point for real t
    double phase_stability_rms{phase_noise_floor(reference_stability, reference_wavelength).radians};
};

struct NoiseBudget {
    double probe_relative_intensity_noise{1.1e-5};  // 1/sqrt(Hz), low-frequency technical noise
    double probe_linewidth{50e3};                   // Hz
    double coupling_linewidth{50e3};                // Hz
    double reference_linewidth{300e3};              // Hz
    double detector_nep{2e-12};                     // W/sqrt(Hz), per detector
    double signal_power{10e-6};                     // W entering the signal arm
    double quantum_efficiency{0.5};
    double wavelength{cs::d2_wavelength};           // m
    double coupling_am_noise{0.0};                  // W/sqrt(Hz), additive, both channels
};

void validate(const InterferometerConfig& c);
void validate(const NoiseBudget& n);

// Probe plus coupling linewidths added in quadrature (Hz).
double combined_laser_linewidth(const NoiseBudget& n);

struct PortPowers {
    double a{0};
    double b{0};
};

// Lossless combiner: E_a = sqrt(s) L + sqrt(1-s) S, E_b = sqrt(1-s) L - sqrt(s) S.
PortPowers combine(std::complex<double> lo, std::complex<double> signal, double splitter_ratio);

// P_a - P_b for LO amplitude sqrt(R) e^{i phi} and signal amplitude t, per unit
// signal-arm input power. For s = 1/2 this is 2 sqrt(R) |t| cos(phi - arg t).
double homodyne_signal(std::complex<double> t, const InterferometerConfig& config);

struct SnrComparison {
    double signal_direct{0};  // W
    double noise_direct{0};   // W/sqrt(Hz)
    double signal_mzi{0};
    double noise_mzi{0};
    double snr_direct{0};
    double snr_mzi{0};
    double enhancement{0};
};

// Peak signal of each channel across the EIT trace against the trace
// baseline, with white noise densities added in quadrature. The MZI phase
// jitter scales the demodulated signal (lock servo residual, slow against the
// lock-in frequency).
SnrComparison snr_comparison(const SpectralTrace& eit_trace, const InterferometerConfig& config,
                             const NoiseBudget& noise);

}  // namespace rydsense
