#pragma once

#include "rydsense/quantum_core.hpp"
#include "rydsense/units.hpp"

namespace rydsense::cs {

// Wavelengths (m)
inline constexpr double d2_wavelength = 852.347e-9;       // 6S1/2 - 6P3/2
inline constexpr double coupling_wavelength = 509.0e-9;   // 6P3/2 - 52D5/2
inline constexpr double d1_wavelength = 894.593e-9;       // 6S1/2 - 6P1/2
inline constexpr double s9_wavelength = 635.63e-9;        // 6P1/2 - 9S1/2
inline constexpr double p53_wavelength = 2246.73e-9;      // 9S1/2 - 53P3/2

// Decay rates (rad/s)
inline constexpr double gamma_6p32 = units::angular(5.2e6);
inline constexpr double gamma_6p12 = units::angular(4.575e6);
inline constexpr double gamma_9s = units::angular(1.0e6);   // lifetime ~160 ns
inline constexpr double gamma_52d = units::angular(3.4e3);
inline constexpr double gamma_53p = units::angular(1.6e3);

// Probe transition dipoles (C m)
inline constexpr double d2_dipole = 1.714e-29;   // isotropic F=4 -> F'=5
inline constexpr double d1_dipole = 1.552e-29;   // far-detuned effective value
inline constexpr double ground_f4_fraction = 9.0 / 16.0;

// 52D5/2 <-> 53P3/2 RF transition
inline constexpr double rf_dipole_ea0 = 1745.0;
inline constexpr double rf_frequency = 5.047e9;  // Hz

struct FourLevel {
    double probe_rabi{0};     // rad/s
    double coupling_rabi{0};
    double rf_rabi{0};
    double probe_detuning{0};
    double coupling_detuning{0};
    double rf_detuning{0};
};

// 6S1/2(F=4) - 6P3/2(F'=5) - 52D5/2 - 53P3/2; probe +k, coupling counterpropagating
LadderScheme four_level(const FourLevel& p);

// Same without the RF step
LadderScheme three_level(double probe_rabi, double coupling_rabi, double probe_detuning = 0.0,
                         double coupling_detuning = 0.0);

struct FiveLevel {
    double probe_rabi{0};
    double intermediate_rabi{0};  // 6P1/2 - 9S1/2 laser
    double coupling_rabi{0};
    double rf_rabi{0};
    double probe_detuning{0};
    double intermediate_detuning{0};
    double coupling_detuning{0};
    double rf_detuning{0};
};

// 6S1/2 - 6P1/2 - 9S1/2 - 53P3/2 - 52D5/2, three collinear lasers with
// the 636 nm beam counterpropagating; RF couples 53P3/2 and 52D5/2.
LadderScheme five_level(const FiveLevel& p);

}  // namespace rydsense::cs
