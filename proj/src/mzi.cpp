#include "rydsense/mzi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rydsense/errors.hpp"

namespace rydsense {

namespace {

using cplx = std::complex<double>;

void check_nonneg(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be >= 0");
}

double median_outer(const std::vector<double>& y) {
    const std::size_t m = y.size();
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.05 * static_cast<double>(m))));
    std::vector<double> o;
    for (std::size_t i = 0; i < k; ++i) {
        o.push_back(y[i]);
        o.push_back(y[m - 1 - i]);
    }
    std::sort(o.begin(), o.end());
    return (o.size() % 2) ? o[o.size() / 2] : 0.5 * (o[o.size() / 2 - 1] + o[o.size() / 2]);
}

std::size_t peak_index(const std::vector<double>& y, double base) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (std::abs(y[i] - base) > std::abs(y[best] - base)) best = i;
    return best;
}

}  // namespace

PhaseNoise phase_noise_floor(double stability_rms_length, double wavelength) {
    check_nonneg(stability_rms_length, "path stability");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ValidationError("wavelength must be positive");
    return {units::two_pi * stability_rms_length / wavelength, stability_rms_length / (units::two_pi * wavelength)};
}

void validate(const InterferometerConfig& c) {
    if (!(c.lo_signal_ratio > 0.0) || !std::isfinite(c.lo_signal_ratio))
        throw ValidationError("LO/signal ratio must be positive");
    if (!(c.splitter_ratio > 0.0 && c.splitter_ratio < 1.0)) throw ValidationError("splitter ratio must lie in (0, 1)");
    if (!std::isfinite(c.path_phase)) throw ValidationError("path phase must be finite");
    check_nonneg(c.phase_stability_rms, "phase stability");
}

void validate(const NoiseBudget& n) {
    check_nonneg(n.probe_relative_intensity_noise, "RIN");
    check_nonneg(n.probe_linewidth, "probe linewidth");
    check_nonneg(n.coupling_linewidth, "coupling linewidth");
    check_nonneg(n.reference_linewidth, "reference linewidth");
    check_nonneg(n.detector_nep, "detector NEP");
    check_nonneg(n.coupling_am_noise, "AM noise");
    if (!(n.signal_power > 0.0)) throw ValidationError("signal power must be positive");
    if (!(n.quantum_efficiency > 0.0 && n.quantum_efficiency <= 1.0))
        throw ValidationError("quantum efficiency must lie in (0, 1]");
    if (!(n.wavelength > 0.0)) throw ValidationError("wavelength must be positive");
}

double combined_laser_linewidth(const NoiseBudget& n) { return std::hypot(n.probe_linewidth, n.coupling_linewidth); }

PortPowers combine(cplx lo, cplx signal, double s) {
    if (!(s > 0.0 && s < 1.0)) throw ValidationError("splitter ratio must lie in (0, 1)");
    const double r = std::sqrt(s), q = std::sqrt(1.0 - s);
    return {std::norm(r * lo + q * signal), std::norm(q * lo - r * signal)};
}

double homodyne_signal(cplx t, const InterferometerConfig& c) {
    validate(c);
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw ValidationError("signal transmission amplitude must satisfy |t| <= 1");
    const double s = c.splitter_ratio;
    const cplx lo = std::polar(std::sqrt(c.lo_signal_ratio), c.path_phase);
    return (2.0 * s - 1.0) * (std::norm(lo) - std::norm(t)) + 4.0 * std::sqrt(s * (1.0 - s)) * std::real(std::conj(lo) * t);
}

SnrComparison snr_comparison(const SpectralTrace& trace, const InterferometerConfig& config, const NoiseBudget& noise) {
    validate(config);
    validate(noise);
    const std::size_t m = trace.transmission.size();
    if (m < 5) throw ValidationError("trace needs at least 5 points");
    const auto amp = trace.amplitude();
    const double P = noise.signal_power;
    const double hv = units::planck * units::speed_of_light / noise.wavelength;
    const double eta = noise.quantum_efficiency;
    const double rin = noise.probe_relative_intensity_noise;

    // direct detection of the transmitted signal-arm power
    std::vector<double> direct(m), diff(m);
    for (std::size_t i = 0; i < m; ++i) {
        direct[i] = P * trace.transmission[i];
        diff[i] = P * homodyne_signal(amp[i], config);
    }
    const double d_base = median_outer(direct);
    const std::size_t id = peak_index(direct, d_base);
    SnrComparison out;
    out.signal_direct = std::abs(direct[id] - d_base);
    out.noise_direct = std::sqrt(std::pow(rin * d_base, 2) + 2.0 * hv * d_base / eta +
                                 std::pow(noise.detector_nep, 2) + std::pow(noise.coupling_am_noise, 2));

    // homodyne: RIN on the residual DC difference, shot noise on both ports,
    // two detectors, phase jitter on the demodulated signal
    const double m_base = median_outer(diff);
    const std::size_t im = peak_index(diff, m_base);
    out.signal_mzi = std::abs(diff[im] - m_base);
    const double t_base2 = d_base / P;
    const double total_power = P * (config.lo_signal_ratio + t_base2);
    const double s = config.splitter_ratio;
    const double k = 4.0 * std::sqrt(s * (1.0 - s)) * std::sqrt(config.lo_signal_ratio) * P;
    std::vector<double> phase_base;
    const double dphi_peak = -k * std::abs(amp[im]) * std::sin(config.path_phase - std::arg(amp[im]));
    for (std::size_t i = 0; i < m; ++i)
        phase_base.push_back(-k * std::abs(amp[i]) * std::sin(config.path_phase - std::arg(amp[i])));
    const double dphi_signal = dphi_peak - median_outer(phase_base);
    out.noise_mzi = std::sqrt(std::pow(rin * m_base, 2) + 2.0 * hv * total_power / eta +
                              2.0 * std::pow(noise.detector_nep, 2) +
                              std::pow(config.phase_stability_rms * dphi_signal, 2) +
                              std::pow(noise.coupling_am_noise, 2));

    if (!(out.noise_direct > 0.0) || !(out.noise_mzi > 0.0)) throw UndefinedSnrError("noise vanishes; SNR is undefined");
    out.snr_direct = out.signal_direct / out.noise_direct;
    out.snr_mzi = out.signal_mzi / out.noise_mzi;
    if (!(out.snr_direct > 0.0)) throw UndefinedSnrError("direct-detection signal vanishes");
    out.enhancement = out.snr_mzi / out.snr_direct;
    return out;
}

}  // namespace rydsense
