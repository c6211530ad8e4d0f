// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "rydsense/dephasing.hpp"
#include "rydsense/errors.hpp"
#include "rydsense/mzi.hpp"
#include "rydsense/presets.hpp"
#include "rydsense/quantum_core.hpp"
#include "rydsense/scenario.hpp"
#include "rydsense/sensing.hpp"
#include "rydsense/spectroscopy.hpp"
#include "test_support.hpp"

using namespace rydsense;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Table& table(const ScenarioResult& r, const std::string& name) {
    for (const auto& t : r.tables)
        if (t.name == name) return t;
    throw Error("missing table " + name);
}

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i].name == name) return i;
    throw Error("missing column " + name);
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// 1 -------------------------------------------------------------------------
Outcome solver_correctness() {
    constexpr int cases = 1000;
    constexpr double exact_tol = 1e-12, invariant_tol = 1e-10, oracle_tol = 1e-8, time_limit = 60.0;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    double worst_trace = 0, worst_herm = 0, worst_residual = 0, min_eig = 1;
    for (int k = 0; k < cases; ++k) {
        const auto c = testing::random_case(rng);
        const auto H = build_hamiltonian(c.scheme, c.velocity);
        const auto L = build_relaxation(c.scheme, c.budget);
        const auto ss = steady_state(H, L);
        worst_trace = std::max(worst_trace, ss.trace_error());
        worst_herm = std::max(worst_herm, ss.hermiticity_error());
        min_eig = std::min(min_eig, ss.min_eigenvalue());
        worst_residual = std::max(worst_residual, liouvillian_residual(H, L, ss.rho) / liouvillian(H, L).cwiseAbs().maxCoeff());
    }
    double worst_oracle = 0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < cases; ++k) {
        const double gamma = units::angular(testing::log_uniform(rng, 1e5, 1e7));
        const double rabi = gamma * testing::log_uniform(rng, 1e-3, 30.0);
        const double delta = gamma * 20.0 * u(rng);
        LadderScheme s;
        s.levels = {Level{"g", 0.0, {}, false}, Level{"e", gamma, {}, false}};
        s.couplings = {Coupling{0, 1, rabi, delta, units::wavevector(852e-9), CouplingKind::optical}};
        s.probe_dipole = 1e-29;
        DephasingBudget b;
        b.laser = gamma * testing::log_uniform(rng, 1e-4, 1.0);
        const auto ss = steady_state(build_hamiltonian(s, 0.0), build_relaxation(s, b));
        const auto ref = testing::two_level_oracle(rabi, delta, gamma, 0.5 * (gamma + b.laser));
        worst_oracle = std::max(worst_oracle, std::abs(ss.rho(1, 0) - ref.rho10) / std::abs(ref.rho10));
    }
    const double t = seconds_since(t0);
    const bool ok = worst_trace < exact_tol && worst_herm < exact_tol && min_eig > -invariant_tol &&
                    worst_residual < invariant_tol && worst_oracle < oracle_tol && t < time_limit;
    std::ostringstream d;
    d << cases << " ladders: trace " << worst_trace << ", hermiticity " << worst_herm << ", min eigenvalue " << min_eig
      << ", residual " << worst_residual << "; two-level oracle " << worst_oracle << " (tol " << oracle_tol << "); "
      << fmt("%.1f s", t);
    return {ok, d.str()};
}

// 2 -------------------------------------------------------------------------
double eit_worst(double probe_fraction) {
    const double gamma0 = cs::gamma_6p32;
    DephasingBudget b;
    b.laser = units::angular(50e3);
    b.collisional = units::angular(20e3);
    b.magnetic = units::angular(10e3);
    const double wc = units::angular(2e6), dc = units::angular(0.3e6);
    const double g10 = 0.5 * (gamma0 + b.laser);
    const double g20 = 0.5 * (cs::gamma_52d + b.laser + b.collisional + b.magnetic);
    double worst = 0;
    for (int i = 0; i <= 20; ++i) {
        // includes dp = -dc, the two-photon resonance
        const double dp = units::angular(-10e6 + 1e6 * i) - (i == 10 ? dc : 0.0);
        const auto s = cs::three_level(gamma0 * probe_fraction, wc, dp, dc);
        const auto ss = steady_state(build_hamiltonian(s, 0.0), build_relaxation(s, b));
        const auto ref = testing::eit_oracle(gamma0 * probe_fraction, wc, dp, dc, g10, g20);
        worst = std::max(worst, std::abs(probe_coherence(ss.rho, s).imag() - ref.imag()) / std::abs(ref.imag()));
    }
    return worst;
}

Outcome eit_oracle() {
    constexpr double tol = 1e-4, time_limit = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    const double at_100 = eit_worst(1e-2), at_1000 = eit_worst(1e-3);
    const double t = seconds_since(t0);
    std::ostringstream d;
    d << "Im rho worst relative error, Omega_c 2 MHz, 21 detunings: Omega_p = Gamma0/100 -> " << at_100
      << ", Gamma0/1000 -> " << at_1000 << " (tol " << tol << "); " << fmt("%.2f s", t);
    return {at_100 < tol && at_1000 < tol && t < time_limit, d.str()};
}

// 3 -------------------------------------------------------------------------
Outcome at_law() {
    constexpr double tol = 0.02, round_trip_tol = 1e-12;
    const RfTransition tr;
    const std::vector<double> rabis_hz = {1e6, 2.23e6, 5e6, 10e6};
    std::ostringstream d;
    bool ok = true;

    // raw v = 0 spectrum, weak probe
    CellConditions cond;
    DephasingBudget b;
    b.laser = units::angular(70e3);
    b.magnetic = units::angular(50e3);
    DopplerSettings none;
    none.method = DopplerMethod::none;
    const auto grid = linear_grid(units::angular(-12e6), units::angular(12e6), 961);
    d << "weak-probe spectrum ratio";
    for (double hz : rabis_hz) {
        const auto s = cs::four_level({units::angular(0.1e6), units::angular(0.5e6), units::angular(hz), 0, 0, 0});
        const double r = find_at_peaks(doppler_averaged_trace(s, b, cond, none, grid)).splitting / hz;
        ok = ok && std::abs(r - 1.0) <= tol;
        d << fmt(" %.4f", r);
    }

    // fig2b preset, Doppler-free sub-mode, lock-in signal
    auto c = preset(ScenarioKind::fig2b_at);
    c.doppler_free = true;
    c.numerics.detuning_span_hz = 12e6;
    c.numerics.detuning_points = 961;
    d << "; fig2b Doppler-free ratio";
    for (double hz : rabis_hz) {
        c.sweep.start = c.sweep.stop = at_splitting_to_field(hz, tr);
        c.sweep.points = 2;
        const auto r = run_scenario(c);
        const auto& t = table(r, "splitting");
        const double sp = t.rows[0][column(t, "splitting")];
        const double ratio = sp / hz;
        ok = ok && std::isfinite(ratio) && std::abs(ratio - 1.0) <= tol;
        d << fmt(" %.4f", ratio);
    }

    double worst = 0;
    for (double e : {1e-7, 4.4787e-5, 0.0999, 1.0, 37.0}) {
        worst = std::max(worst, std::abs(at_splitting_to_field(field_to_at_splitting(e, tr), tr) - e) / e);
        worst = std::max(worst, std::abs(field_from_rf_rabi(rf_rabi_from_field(e, tr), tr) - e) / e);
    }
    ok = ok && worst <= round_trip_tol;
    d << "; round trip " << worst << " (tol " << tol << " / " << round_trip_tol << ")";
    return {ok, d.str()};
}

// 4 -------------------------------------------------------------------------
Outcome collisional_model() {
    const GasParams gas;
    const double el = elastic_coefficient(gas, reference_temperature);
    const double total = el + inelastic_coefficient(gas);
    const double sigma = collision_cross_section(total, rms_speed(reference_temperature, gas.mass));
    const bool ok = rel_close(el, 1.2e-13, 0.05) && rel_close(total, 1.7e-13, 0.05) && rel_close(sigma, 7.2e-12, 0.10);
    std::ostringstream d;
    d << "elastic " << el << " (1.2e-13 +/-5%), total " << total << " (1.7e-13 +/-5%), sigma(rms speed) " << sigma
      << " cm^2 (7.2e-12 +/-10%)";
    return {ok, d.str()};
}

// 5 -------------------------------------------------------------------------
Outcome transit_calibration() {
    const std::vector<std::pair<double, double>> pairs = {{0.32e-3, 94e3}, {0.5e-3, 60e3}, {1.1e-3, 27e3}};
    const double c = calibrate_transit_constant(pairs, reference_temperature, units::cesium_mass);
    std::ostringstream d;
    d << "c_t " << c;
    bool ok = true;
    for (const auto& [dia, hz] : pairs) {
        const double r = units::hertz(transit_broadening(dia, reference_temperature, units::cesium_mass, c));
        ok = ok && rel_close(r, hz, 0.10);
        d << fmt("; %.2f mm", dia * 1e3) << fmt(" -> %.1f kHz", r / 1e3) << fmt(" (%.0f kHz)", hz / 1e3);
    }
    d << " (tol 10%)";
    return {ok, d.str()};
}

// 6 -------------------------------------------------------------------------
Outcome fig3_signs() {
    const auto c = preset(ScenarioKind::fig3_power);
    const auto r = run_scenario(c);
    const auto& t = table(r, "curves");
    const auto dt = column(t, "delta_t");
    const std::size_t np = c.sweep.points;
    bool ok = true;
    std::ostringstream d;
    for (std::size_t s = 0; s < c.series.size(); ++s) {
        const double zero = t.rows[s * np][dt], first = t.rows[s * np + 1][dt], second = t.rows[s * np + 2][dt];
        const bool c33 = c.series[s].label.rfind("c3.3", 0) == 0;
        const bool sign_ok = c33 ? first > 0.0 : first < 0.0;
        // zero at E = 0 and shrinking toward it
        const bool vanish = zero == 0.0 && std::abs(first) < std::abs(second);
        ok = ok && sign_ok && vanish;
        d << (s ? "; " : "") << c.series[s].label << fmt(" %+.3g%%", first);
    }
    d << fmt(" at %.3g V/m (expect + for c3.3, - for c2.7)", t.rows[1][column(t, c.sweep.parameter)]);
    return {ok, d.str()};
}

// 7 -------------------------------------------------------------------------
std::vector<std::pair<std::string, double>> slopes(ScenarioKind k) {
    const auto r = run_scenario(preset(k));
    std::vector<std::pair<std::string, double>> out;
    for (const auto& s : r.report["series"])
        out.emplace_back(s["label"].get<std::string>(), std::abs(s["slope_at_zero"].get<double>()));
    return out;
}

Outcome monotonicity() {
    const auto density = slopes(ScenarioKind::fig4b_density_response);
    const auto transit = slopes(ScenarioKind::fig5_transit);  // beams 0.32, 0.50, 1.10 mm: transit falls
    bool dens_ok = true, tran_ok = true;
    for (std::size_t i = 1; i < density.size(); ++i) dens_ok = dens_ok && density[i].second < density[i - 1].second;
    for (std::size_t i = 1; i < transit.size(); ++i) tran_ok = tran_ok && transit[i].second > transit[i - 1].second;
    std::ostringstream d;
    d << "|slope| %/(V/m) by temperature:";
    for (const auto& [l, s] : density) d << " " << l << fmt(" %.1f", s);
    d << (dens_ok ? " (decreasing)" : " (NOT decreasing)") << "; by coupling beam:";
    for (const auto& [l, s] : transit) d << " " << l << fmt(" %.1f", s);
    d << (tran_ok ? " (rising as transit falls)" : " (NOT monotone)");
    return {dens_ok && tran_ok, d.str()};
}

// 8 -------------------------------------------------------------------------
Outcome sensitivity() {
    const double snr = photon_shot_noise_snr(10e-6, 0.5, 1.0, cs::d2_wavelength);
    const bool snr_ok = snr >= 3e6 / 2 && snr <= 3e6 * 2;

    // operating point: largest coupling beam of the transit series
    const auto r = run_scenario(preset(ScenarioKind::fig5_transit));
    const auto& rep = r.report["series"].back();
    const double emin = rep["min_detectable_field"].is_null() ? NAN : rep["min_detectable_field"].get<double>();
    const double uv_per_cm = emin * 1e4;  // V/m -> uV/cm
    const bool decade_ok = uv_per_cm >= 1.0 && uv_per_cm < 10.0;

    const RfTransition tr;
    const double e = atom_shot_noise_limit(1e6, 5e-6, tr);
    const bool scaling_ok = rel_close(atom_shot_noise_limit(4e6, 5e-6, tr), e / 2, 1e-12) &&
                            rel_close(atom_shot_noise_limit(1e6, 20e-6, tr), e / 2, 1e-12) &&
                            rel_close(atom_shot_noise_limit(1e6, 5e-6, RfTransition{3 * tr.dipole_moment, tr.frequency}),
                                      e / 3, 1e-12) &&
                            rel_close(e, units::planck / (tr.dipole_si() * std::sqrt(5e-6 * 1e6)), 1e-12);
    std::ostringstream d;
    d << "photon SNR " << fmt("%.3g", snr) << " (3e6 x/ 2); E_min " << rep["label"].get<std::string>() << " "
      << fmt("%.3g uV/cm/Hz^0.5", uv_per_cm) << " (1-10 decade); atom-shot scaling " << (scaling_ok ? "exact" : "broken");
    return {snr_ok && decade_ok && scaling_ok, d.str()};
}

// 9 -------------------------------------------------------------------------
Outcome mzi_model() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0), sp(0.01, 0.99);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const std::complex<double> lo(u(rng), u(rng)), sig(u(rng), u(rng));
        const auto p = combine(lo, sig, sp(rng));
        const double in = std::norm(lo) + std::norm(sig);
        worst = std::max(worst, std::abs(p.a + p.b - in) / in);
    }
    // either arm alone splits evenly, so its intensity noise drops out of P_a - P_b
    double cmr = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::complex<double> field(u(rng), u(rng));
        const auto lo_only = combine(field, 0.0, 0.5), sig_only = combine(0.0, field, 0.5);
        cmr = std::max({cmr, std::abs(lo_only.a - lo_only.b), std::abs(sig_only.a - sig_only.b)});
    }
    const auto r = run_scenario(preset(ScenarioKind::fig2b_at));
    const double enh = r.report["series"][0]["mzi"]["enhancement"].get<double>();
    const bool ok = worst <= 1e-12 && cmr == 0.0 && enh >= 10.0 && enh <= 40.0;
    std::ostringstream d;
    d << "energy " << worst << " (tol 1e-12); common-mode residual " << cmr << " (exact); enhancement "
      << fmt("%.1f", enh) << " (20 x/ 2)";
    return {ok, d.str()};
}

// 10 ------------------------------------------------------------------------
Outcome three_photon() {
    const auto r = run_scenario(preset(ScenarioKind::fig6_three_photon));
    const auto& t = table(r, "splitting");
    const auto cr = column(t, "rf_rabi"), cs_ = column(t, "splitting");
    std::vector<double> x, y;
    for (const auto& row : t.rows)
        if (row[cr] > 0.0) {
            x.push_back(row[cr]);
            y.push_back(row[cs_]);
        }
    bool mono = !x.empty();
    for (std::size_t i = 0; i < y.size(); ++i) mono = mono && std::isfinite(y[i]) && (i == 0 || y[i] > y[i - 1]);
    // linearity over the upper half of the Rabi range
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= 0.5 * x.back()) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / xs.size();
        my += ys[i] / xs.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx, icpt = my - slope * mx;
    double dev = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) dev = std::max(dev, std::abs(ys[i] - (slope * xs[i] + icpt)) / ys[i]);
    const double nv_per_cm = r.report["field_at_1khz_rabi_v_per_m"].get<double>() * 1e7;
    const bool ok = mono && dev <= 0.05 && rel_close(nv_per_cm, 450.0, 0.15);
    std::ostringstream d;
    d << x.size() << " splittings " << (mono ? "monotonic" : "NOT monotonic") << "; linear fit deviation "
      << fmt("%.2g", dev) << " (tol 0.05), slope " << fmt("%.4f", slope) << "; field at 1 kHz Rabi "
      << fmt("%.1f nV/cm", nv_per_cm) << " (450 +/-15%)";
    return {ok, d.str()};
}

// 11 ------------------------------------------------------------------------
std::vector<std::string> files_of(const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream s;
        s << e.path().filename().string() << '\n' << in.rdbuf();
        out.push_back(s.str());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("rydsense_accept_" + std::to_string(::getpid()));
    bool ok = true;
    std::ostringstream d;
    for (auto k : {ScenarioKind::fig3_power, ScenarioKind::fig2b_at, ScenarioKind::fig4a_fwhm_vs_density}) {
        const auto c = preset(k);
        std::vector<std::vector<std::string>> runs;
        for (unsigned threads : {1u, 4u, 1u}) {
            const fs::path dir = root / (to_string(k) + "_" + std::to_string(runs.size()));
            fs::create_directories(dir);
            write_outputs(c, run_scenario(c, threads), dir);
            runs.push_back(files_of(dir));
        }
        const bool same = runs[0] == runs[1] && runs[1] == runs[2];
        ok = ok && same;
        d << (d.tellp() ? "; " : "") << to_string(k) << (same ? " identical" : " DIFFERS");
    }
    fs::remove_all(root);
    d << " (threads 1/4/1, byte compare)";
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"solver correctness", solver_correctness},
        {"EIT weak-probe oracle", eit_oracle},
        {"AT law", at_law},
        {"collisional model", collisional_model},
        {"transit calibration", transit_calibration},
        {"fig3 sign structure", fig3_signs},
        {"dephasing monotonicity", monotonicity},
        {"sensitivity anchors", sensitivity},
        {"MZI model", mzi_model},
        {"three-photon scenario", three_photon},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
