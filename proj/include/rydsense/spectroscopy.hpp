#pragma once

#include <cstddef>
#include <vector>

#include "rydsense/quantum_core.hpp"
#include "rydsense/units.hpp"

namespace rydsense {

struct VelocityGrid {
    std::vector<double> nodes;    // m/s
    std::vector<double> weights;  // sum to 1
    double temperature{0.0};
    double atomic_mass{0.0};
};

// One-dimensional thermal velocity spread sqrt(kT/m).
double thermal_velocity_sigma(double temperature, double mass);

// Trapezoid rule for the 1D Maxwell-Boltzmann distribution on [-span, span]
// thermal widths. n_points must be odd and >= 3, span >= 3.
VelocityGrid make_velocity_grid(double temperature, double mass, std::size_t n_points, double span);

// 0.0025 thermal widths per step (0.39 m/s at 294 K). Doubling from here
// moves transmission by < 3e-5 for the preset Rabi frequencies; 1601 points
// does not resolve the weak-probe EIT feature to 1e-4.
inline constexpr std::size_t default_velocity_points = 3201;
inline constexpr double default_velocity_span = 4.0;

struct CellConditions {
    double temperature{294.0};        // K
    double density{3.1e16};           // m^-3, total vapor density
    double length{0.04};              // m
    double probe_diameter{1.36e-3};   // m
    double coupling_diameter{0.1e-3}; // m
    double atomic_mass{units::cesium_mass};
};

void validate(const CellConditions& c);

enum class DopplerMethod {
    analytic,    // exact Maxwell-Boltzmann average via the pole expansion of rho(v)
    quadrature,  // trapezoid velocity grid
    none,        // single velocity class v = 0
};

struct DopplerSettings {
    DopplerMethod method{DopplerMethod::analytic};
    std::size_t velocity_points{default_velocity_points};
    double velocity_span{default_velocity_span};
};

// Probe coherence rho(upper, lower) averaged over a Gaussian velocity
// distribution of standard deviation sigma_v. Exact up to the accuracy of the
// Faddeeva evaluation; falls back to a fine quadrature if the velocity
// operator cannot be diagonalized stably.
cplx thermal_probe_coherence(const LadderScheme& scheme, const Eigen::MatrixXcd& relaxation, double sigma_v);

cplx grid_probe_coherence(const LadderScheme& scheme, const Eigen::MatrixXcd& relaxation, const VelocityGrid& grid);

struct ProbeResponse {
    cplx coherence;        // velocity-averaged rho(upper, lower)
    cplx susceptibility;
    double absorption{0};  // intensity absorption coefficient, 1/m
    double phase{0};       // probe phase accumulated over the cell, rad
    double transmission{0};
    cplx amplitude;        // complex field transmission sqrt(T) e^{i phase}
};

ProbeResponse probe_response(const LadderScheme& scheme, const DephasingBudget& budget,
                             const CellConditions& conditions, const DopplerSettings& doppler);

struct SpectralTrace {
    std::vector<double> detunings;     // rad/s, probe detuning, monotone
    std::vector<double> transmission;  // fraction
    std::vector<double> absorption;    // 1/m
    std::vector<double> phase;         // rad
    LadderScheme scheme;
    CellConditions conditions;

    std::vector<cplx> amplitude() const;
};

SpectralTrace doppler_averaged_trace(const LadderScheme& scheme, const DephasingBudget& budget,
                                     const CellConditions& conditions, const VelocityGrid& grid,
                                     const std::vector<double>& detuning_grid, unsigned threads = 1);

SpectralTrace doppler_averaged_trace(const LadderScheme& scheme, const DephasingBudget& budget,
                                     const CellConditions& conditions, const DopplerSettings& doppler,
                                     const std::vector<double>& detuning_grid, unsigned threads = 1);

std::vector<double> linear_grid(double start, double stop, std::size_t points);

// Full width at half maximum of y - baseline in units of x. The baseline is
// the median of the outer 10% of samples.
double fwhm(const std::vector<double>& x, const std::vector<double>& y);
double fwhm(const SpectralTrace& trace);  // Hz

struct AtPeaks {
    double peak1{0};      // units of x (rad/s for traces)
    double peak2{0};
    double splitting{0};  // |peak2 - peak1|, Hz for traces
};

// Two highest interior maxima of y. The dip between them must fall below the
// lower peak by min_dip of that peak's height above min(y).
AtPeaks find_at_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_dip = 0.05);
// Peaks of the transparency -alpha (transmission in the optically thin limit),
// which does not saturate at high optical depth.
AtPeaks find_at_peaks(const SpectralTrace& trace, double min_dip = 0.05);

// FWHM (Hz) of the Doppler profile seen through an effective wavevector k.
double doppler_fwhm(double wavevector, double temperature, double mass);

}  // namespace rydsense
