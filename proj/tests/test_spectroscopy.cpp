#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "rydsense/dephasing.hpp"
#include "rydsense/errors.hpp"
#include "rydsense/presets.hpp"
#include "rydsense/spectroscopy.hpp"
#include "test_support.hpp"

namespace {

using namespace rydsense;

TEST(VelocityGrid, NormalizedAndSymmetric) {
    const auto g = make_velocity_grid(294.0, units::cesium_mass, 201, 4.0);
    ASSERT_EQ(g.nodes.size(), 201u);
    EXPECT_NEAR(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), 1.0, 1e-14);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        EXPECT_EQ(g.nodes[i], -g.nodes[200 - i]);
        EXPECT_EQ(g.weights[i], g.weights[200 - i]);
    }
    EXPECT_EQ(g.nodes[100], 0.0);
    const double sigma = thermal_velocity_sigma(294.0, units::cesium_mass);
    EXPECT_NEAR(g.nodes.back(), 4.0 * sigma, 1e-12 * sigma);
    double var = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) var += g.weights[i] * g.nodes[i] * g.nodes[i];
    EXPECT_NEAR(std::sqrt(var), sigma, 3e-3 * sigma);
}

TEST(VelocityGrid, RejectsBadInput) {
    EXPECT_THROW(make_velocity_grid(294.0, units::cesium_mass, 200, 4.0), ValidationError);
    EXPECT_THROW(make_velocity_grid(294.0, units::cesium_mass, 1, 4.0), ValidationError);
    EXPECT_THROW(make_velocity_grid(294.0, units::cesium_mass, 201, 2.0), ValidationError);
    EXPECT_THROW(make_velocity_grid(-1.0, units::cesium_mass, 201, 4.0), ValidationError);
}

TEST(Doppler, ProbeWidthAtRoomTemperature) {
    // sqrt(8 ln2 kT/m)/lambda for Cs D2 at 294 K
    EXPECT_NEAR(doppler_fwhm(units::wavevector(cs::d2_wavelength), 294.0, units::cesium_mass), 3.7468e8, 2e5);
}

TEST(Doppler, AnalyticMatchesFineQuadrature) {
    const auto s = cs::three_level(units::angular(1.8e6), units::angular(0.5e6), units::angular(0.3e6));
    DephasingBudget b;
    b.transit = units::angular(300e3);
    b.laser = units::angular(70e3);
    b.magnetic = units::angular(50e3);
    const auto L = build_relaxation(s, b);
    const double sigma = thermal_velocity_sigma(294.0, units::cesium_mass);
    const cplx a = thermal_probe_coherence(s, L, sigma);
    const auto g = make_velocity_grid(294.0, units::cesium_mass, 12001, 6.0);
    const cplx q = grid_probe_coherence(s, L, g);
    EXPECT_LT(std::abs(a - q), 1e-6 * std::abs(q));
}

TEST(Doppler, ZeroWidthIsTheRestFrameSolution) {
    const auto s = cs::three_level(units::angular(1e6), units::angular(2e6), units::angular(0.4e6));
    const auto L = build_relaxation(s, {});
    const auto ss = steady_state(build_hamiltonian(s, 0.0), L);
    EXPECT_LT(std::abs(thermal_probe_coherence(s, L, 0.0) - probe_coherence(ss.rho, s)), 1e-12);
}

TEST(Doppler, TwoLevelVoigtProfile) {
    // weak-probe two-level coherence over the thermal distribution,
    // <i/(g + i(d - k v))> from scipy.special.wofz
    struct Ref {
        double detuning, re, im;
    };
    constexpr Ref refs[] = {
        {0.0, 0.0, 1.2374732613656933e-09},
        {1e8, 9.770835228164303e-11, 1.2313777984347096e-09},
        {-7e8, -5.853063095637956e-10, 9.716547319658338e-10},
        {2.5e9, 4.995770986667172e-10, 5.911188073955555e-11},
    };
    LadderScheme s;
    const double gamma = cs::gamma_6p32, rabi = 1e-3 * gamma;
    s.levels = {Level{"g", 0.0, {}, false}, Level{"e", gamma, {}, false}};
    s.couplings = {Coupling{0, 1, rabi, 0.0, units::wavevector(cs::d2_wavelength), CouplingKind::optical}};
    s.probe_dipole = 1e-29;
    const double sigma = thermal_velocity_sigma(294.0, units::cesium_mass);
    for (const auto& r : refs) {
        s.couplings[0].detuning = r.detuning;
        const cplx num = thermal_probe_coherence(s, build_relaxation(s, {}), sigma);
        const cplx ref = 0.5 * rabi * cplx(r.re, r.im);
        EXPECT_LT(std::abs(num - ref), 1e-5 * std::abs(ref)) << "detuning " << r.detuning;
    }
}

double eit_error(double frac) {
    const double gamma0 = cs::gamma_6p32;
    DephasingBudget b;
    b.laser = units::angular(50e3);
    b.collisional = units::angular(20e3);
    b.magnetic = units::angular(10e3);
    const double wc = units::angular(2e6), dc = units::angular(0.3e6);
    const double g10 = 0.5 * (gamma0 + b.laser);
    const double g20 = 0.5 * (cs::gamma_52d + b.laser + b.collisional + b.magnetic);
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double dp = units::angular(-10e6 + 1e6 * i);
        const auto s = cs::three_level(gamma0 * frac, wc, dp, dc);
        const auto ss = steady_state(build_hamiltonian(s, 0.0), build_relaxation(s, b));
        const cplx ref = rydsense::testing::eit_oracle(gamma0 * frac, wc, dp, dc, g10, g20);
        worst = std::max(worst, std::abs(probe_coherence(ss.rho, s).imag() - ref.imag()) / std::abs(ref.imag()));
    }
    return worst;
}

TEST(Eit, WeakProbeMatchesPerturbativeSusceptibility) {
    EXPECT_LT(eit_error(1e-3), 1e-4);
    EXPECT_LT(eit_error(1e-4), 1e-6);
}

TEST(Eit, DepartureFromPerturbationTheoryIsQuadraticInProbe) {
    // the residual is the probe-induced Rydberg population, ~ Omega_p^2
    const double a = eit_error(1e-2), b = eit_error(1e-3);
    EXPECT_NEAR(a / b, 100.0, 5.0);
}

TEST(Eit, DarkStateIsTransparent) {
    auto s = cs::three_level(cs::gamma_6p32 * 1e-2, units::angular(2e6), units::angular(0.4e6), units::angular(-0.4e6));
    s.levels[2].population_decay_out = 0.0;
    s.levels[2].decay_branches.clear();
    const auto ss = steady_state(build_hamiltonian(s, 0.0), build_relaxation(s, {}));
    EXPECT_LT(std::abs(probe_coherence(ss.rho, s).imag()), 1e-8);
}

TEST(AutlerTownes, DopplerFreeSplittingEqualsRfRabi) {
    CellConditions c;
    DephasingBudget b;
    b.laser = units::angular(70e3);
    b.magnetic = units::angular(50e3);
    DopplerSettings none;
    none.method = DopplerMethod::none;
    const auto grid = linear_grid(units::angular(-12e6), units::angular(12e6), 961);
    // weak probe: the doublet sits at the RF-dressed eigenvalues
    for (double rf_hz : {1e6, 2.23e6, 5e6, 10e6}) {
        const auto s = cs::four_level({units::angular(0.1e6), units::angular(0.5e6), units::angular(rf_hz), 0, 0, 0});
        const auto p = find_at_peaks(doppler_averaged_trace(s, b, c, none, grid));
        EXPECT_NEAR(p.splitting, rf_hz, 0.02 * rf_hz);
    }
}

TEST(AutlerTownes, StrongProbePullsDoubletInward) {
    CellConditions c;
    DephasingBudget b;
    b.laser = units::angular(70e3);
    b.magnetic = units::angular(50e3);
    DopplerSettings none;
    none.method = DopplerMethod::none;
    const auto grid = linear_grid(units::angular(-12e6), units::angular(12e6), 961);
    auto ratio = [&](double probe_hz) {
        const auto s = cs::four_level({units::angular(probe_hz), units::angular(0.5e6), units::angular(2.23e6), 0, 0, 0});
        return find_at_peaks(doppler_averaged_trace(s, b, c, none, grid)).splitting / 2.23e6;
    };
    EXPECT_LT(ratio(1.8e6), ratio(0.1e6));
    EXPECT_GT(ratio(1.8e6), 0.9);
}

TEST(AutlerTownes, EvenInRfDetuningAndGridConverged) {
    CellConditions c;
    DephasingBudget b;
    b.laser = units::angular(70e3);
    DopplerSettings none;
    none.method = DopplerMethod::none;
    const auto coarse = linear_grid(units::angular(-8e6), units::angular(8e6), 401);
    const auto fine = linear_grid(units::angular(-8e6), units::angular(8e6), 801);
    auto split = [&](double rf_detuning, const std::vector<double>& g) {
        const auto s = cs::four_level({units::angular(1.8e6), units::angular(0.5e6), units::angular(3e6), 0, 0,
                                       units::angular(rf_detuning)});
        return find_at_peaks(doppler_averaged_trace(s, b, c, none, g)).splitting;
    };
    EXPECT_NEAR(split(0.4e6, coarse), split(-0.4e6, coarse), 1e-6 * split(0.4e6, coarse));
    EXPECT_LT(std::abs(split(0.0, coarse) - split(0.0, fine)), 0.005 * split(0.0, fine));
}

TEST(Trace, ThreadCountDoesNotChangeResults) {
    const auto s = cs::four_level({units::angular(1.8e6), units::angular(0.5e6), units::angular(1e6), 0, 0, 0});
    CellConditions c;
    DephasingBudget b;
    b.transit = units::angular(300e3);
    const auto grid = linear_grid(units::angular(-5e6), units::angular(5e6), 41);
    const auto a = doppler_averaged_trace(s, b, c, DopplerSettings{}, grid, 1);
    const auto d = doppler_averaged_trace(s, b, c, DopplerSettings{}, grid, 4);
    EXPECT_EQ(a.transmission, d.transmission);
    EXPECT_EQ(a.phase, d.phase);
}

TEST(Trace, RejectsNonMonotoneGrid) {
    const auto s = cs::three_level(1e6, 1e6);
    EXPECT_THROW(doppler_averaged_trace(s, {}, CellConditions{}, DopplerSettings{}, {1.0, 0.0}), ValidationError);
}

TEST(Trace, QuadratureConvergedAtDefault) {
    const auto s = cs::four_level({units::angular(0.3e6), units::angular(2.7e6), units::angular(0.4e6), 0, 0, 0});
    CellConditions c;
    DephasingBudget b;
    b.transit = units::angular(300e3);
    b.collisional = units::angular(6e3);
    b.laser = units::angular(70e3);
    b.magnetic = units::angular(50e3);
    const auto grid = linear_grid(units::angular(-4e6), units::angular(4e6), 17);
    DopplerSettings q;
    q.method = DopplerMethod::quadrature;
    const auto t1 = doppler_averaged_trace(s, b, c, q, grid);
    q.velocity_points = 2 * default_velocity_points - 1;
    const auto t2 = doppler_averaged_trace(s, b, c, q, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(std::abs(t1.transmission[i] - t2.transmission[i]), 1e-4);
}

TEST(Response, OpticalDepthSanity) {
    // resonant D2 absorption through 4 cm at 3.1e10 cm^-3 without coupling
    auto s = cs::three_level(units::angular(0.1e6), 0.0);
    CellConditions c;
    const auto r = probe_response(s, {}, c, DopplerSettings{});
    const double od = r.absorption * c.length;
    EXPECT_GT(od, 0.5);
    EXPECT_LT(od, 5.0);
    EXPECT_NEAR(r.transmission, std::exp(-od), 1e-15);
    c.density *= 2.0;
    EXPECT_NEAR(probe_response(s, {}, c, DopplerSettings{}).absorption * c.length, 2.0 * od, 1e-9 * od);
}

TEST(Lineshape, FwhmOfLorentzian) {
    std::vector<double> x, y;
    for (int i = -500; i <= 500; ++i) {
        const double t = 0.05 * i;
        x.push_back(t);
        y.push_back(3.0 + 1.0 / (1.0 + t * t / 0.25));  // FWHM 1
    }
    EXPECT_NEAR(fwhm(x, y), 1.0, 1e-3);
}

TEST(Lineshape, FwhmErrors) {
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(i);
        y.push_back(1.0);
    }
    EXPECT_THROW(fwhm(x, y), NoPeakError);
    for (int i = 0; i < 50; ++i) y[i] = std::exp(-0.5 * (i - 48.0) * (i - 48.0) / 25.0);
    EXPECT_THROW(fwhm(x, y), NoPeakError);
}

TEST(Lineshape, AtPeaks) {
    std::vector<double> x, y;
    for (int i = -400; i <= 400; ++i) {
        const double t = 0.01 * i;
        x.push_back(t);
        y.push_back(1.0 / (1.0 + (t - 1.1) * (t - 1.1) / 0.04) + 1.0 / (1.0 + (t + 1.1) * (t + 1.1) / 0.04));
    }
    const auto p = find_at_peaks(x, y);
    EXPECT_NEAR(p.splitting, 2.2, 2e-3);

    std::vector<double> single(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) single[i] = 1.0 / (1.0 + x[i] * x[i]);
    EXPECT_THROW(find_at_peaks(x, single), UnresolvedSplittingError);
}

}  // namespace
