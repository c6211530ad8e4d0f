#include "rydsense/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "rydsense/errors.hpp"
#include "rydsense/parallel.hpp"

namespace rydsense {

namespace {

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be positive");
}

std::size_t rf_coupling(const LadderScheme& s) {
    std::size_t found = s.couplings.size();
    for (std::size_t i = 0; i < s.couplings.size(); ++i)
        if (s.couplings[i].kind == CouplingKind::rf) {
            if (found != s.couplings.size()) throw ValidationError("scheme has more than one RF coupling");
            found = i;
        }
    if (found == s.couplings.size()) throw ValidationError("scheme has no RF coupling");
    return found;
}

}  // namespace

double RfTransition::dipole_si() const { return dipole_moment * units::elementary_charge * units::bohr_radius; }

void validate(const RfTransition& t) {
    check_positive(t.dipole_moment, "RF dipole moment");
    check_positive(t.frequency, "RF frequency");
}

double at_splitting_to_field(double splitting, const RfTransition& t) {
    validate(t);
    if (!(splitting >= 0.0) || !std::isfinite(splitting)) throw ValidationError("splitting must be >= 0");
    return units::planck * splitting / t.dipole_si();
}

double field_to_at_splitting(double field, const RfTransition& t) {
    validate(t);
    if (!(field >= 0.0) || !std::isfinite(field)) throw ValidationError("field must be >= 0");
    return t.dipole_si() * field / units::planck;
}

double rf_rabi_from_field(double field, const RfTransition& t) { return units::angular(field_to_at_splitting(field, t)); }

double field_from_rf_rabi(double rabi, const RfTransition& t) { return at_splitting_to_field(units::hertz(rabi), t); }

WeakFieldCurve weak_field_curve(const LadderScheme& scheme, const DephasingBudget& budget,
                                const CellConditions& conditions, const std::vector<double>& field_grid,
                                const RfTransition& transition, const DopplerSettings& doppler, unsigned threads) {
    validate(scheme);
    validate(transition);
    const std::size_t rf = rf_coupling(scheme);
    for (double e : field_grid)
        if (!(e >= 0.0) || !std::isfinite(e)) throw ValidationError("fields must be >= 0");

    LadderScheme off = scheme;
    off.couplings[rf].rabi = 0.0;
    const double t0 = probe_response(off, budget, conditions, doppler).transmission;

    WeakFieldCurve curve(field_grid.size());
    parallel_for(field_grid.size(), threads, [&](std::size_t i) {
        const double e = field_grid[i];
        curve[i].field = e;
        if (e == 0.0) {
            curve[i].delta_t_percent = 0.0;
            return;
        }
        LadderScheme s = scheme;
        s.couplings[rf].rabi = rf_rabi_from_field(e, transition);
        const double t = probe_response(s, budget, conditions, doppler).transmission;
        curve[i].delta_t_percent = 100.0 * (t - t0) / t0;
    });
    return curve;
}

double slope_at_zero(const WeakFieldCurve& curve) {
    if (curve.size() < 3) throw ValidationError("slope needs at least 3 curve points");
    std::vector<CurvePoint> pts = curve;
    std::stable_sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.field < b.field; });
    const auto m = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(pts.size()) - 1e-9)));
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += pts[i].field;
        sy += pts[i].delta_t_percent;
    }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (pts[i].field - mx) * (pts[i].field - mx);
        sxy += (pts[i].field - mx) * (pts[i].delta_t_percent - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("slope needs distinct field values");
    return sxy / sxx;
}

double atom_shot_noise_limit(double n_atoms, double t2, const RfTransition& t) {
    check_positive(n_atoms, "atom number");
    check_positive(t2, "T2");
    validate(t);
    return units::planck / (t.dipole_si() * std::sqrt(t2 * n_atoms));
}

double photon_shot_noise_snr(double power, double quantum_efficiency, double bandwidth, double wavelength) {
    check_positive(power, "power");
    check_positive(bandwidth, "bandwidth");
    check_positive(wavelength, "wavelength");
    if (!(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0))
        throw ValidationError("quantum efficiency must lie in (0, 1]");
    const double photon_energy = units::planck * units::speed_of_light / wavelength;
    return std::sqrt(quantum_efficiency * power / (2.0 * photon_energy * bandwidth));
}

double noise_floor_percent(double photon_snr, double signal_fraction) {
    check_positive(photon_snr, "SNR");
    if (!(signal_fraction > 0.0 && signal_fraction <= 1.0)) throw ValidationError("signal fraction must lie in (0, 1]");
    return 100.0 / (photon_snr * signal_fraction);
}

double min_detectable_field(const WeakFieldCurve& curve, double noise_floor) {
    if (!(noise_floor >= 0.0) || !std::isfinite(noise_floor)) throw ValidationError("noise floor must be >= 0");
    const double s = std::abs(slope_at_zero(curve));
    if (!(s > 0.0)) throw UnmeasurableError("slope at zero field vanishes; field is unmeasurable");
    return noise_floor / s;
}

}  // namespace rydsense
