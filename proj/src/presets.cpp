#include "rydsense/presets.hpp"

namespace rydsense::cs {

namespace {

Level level(const char* label, double gamma, bool rydberg) {
    Level l;
    l.label = label;
    l.population_decay_out = gamma;
    l.rydberg = rydberg;
    return l;
}

Coupling coupling(std::size_t lower, double rabi, double detuning, double k, CouplingKind kind) {
    return Coupling{lower, lower + 1, rabi, detuning, k, kind};
}

}  // namespace

LadderScheme three_level(double probe_rabi, double coupling_rabi, double probe_detuning, double coupling_detuning) {
    LadderScheme s;
    s.levels = {level("6S1/2", 0.0, false), level("6P3/2", gamma_6p32, false), level("52D5/2", gamma_52d, true)};
    s.couplings = {
        coupling(0, probe_rabi, probe_detuning, units::wavevector(d2_wavelength), CouplingKind::optical),
        coupling(1, coupling_rabi, coupling_detuning, -units::wavevector(coupling_wavelength), CouplingKind::optical),
    };
    s.probe_index = 0;
    s.probe_dipole = d2_dipole;
    s.absorber_fraction = ground_f4_fraction;
    return s;
}

LadderScheme four_level(const FourLevel& p) {
    LadderScheme s = three_level(p.probe_rabi, p.coupling_rabi, p.probe_detuning, p.coupling_detuning);
    s.levels.push_back(level("53P3/2", gamma_53p, true));
    s.couplings.push_back(coupling(2, p.rf_rabi, p.rf_detuning, 0.0, CouplingKind::rf));
    return s;
}

LadderScheme five_level(const FiveLevel& p) {
    LadderScheme s;
    s.levels = {level("6S1/2", 0.0, false), level("6P1/2", gamma_6p12, false), level("9S1/2", gamma_9s, false),
                level("53P3/2", gamma_53p, true), level("52D5/2", gamma_52d, true)};
    s.couplings = {
        coupling(0, p.probe_rabi, p.probe_detuning, units::wavevector(d1_wavelength), CouplingKind::optical),
        coupling(1, p.intermediate_rabi, p.intermediate_detuning, -units::wavevector(s9_wavelength),
                 CouplingKind::optical),
        coupling(2, p.coupling_rabi, p.coupling_detuning, units::wavevector(p53_wavelength), CouplingKind::optical),
        coupling(3, p.rf_rabi, p.rf_detuning, 0.0, CouplingKind::rf),
    };
    s.probe_index = 0;
    s.probe_dipole = d1_dipole;
    s.absorber_fraction = ground_f4_fraction;
    return s;
}

}  // namespace rydsense::cs
