#include "rydsense/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydsense/errors.hpp"
#include "rydsense/faddeeva.hpp"
#include "rydsense/parallel.hpp"

namespace rydsense {

namespace {

constexpr double fwhm_per_sigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

// A(v) = A0 + v D with the trace condition in row 0; A(v) x = b gives vec(rho).
struct VelocitySystem {
    Eigen::MatrixXcd A0;
    Eigen::MatrixXcd D;
    Eigen::VectorXcd b;
    Eigen::Index ul{0};  // vec index of rho(upper, lower)
    Eigen::Index lu{0};
};

VelocitySystem velocity_system(const LadderScheme& scheme, const Eigen::MatrixXcd& relaxation) {
    const auto n = static_cast<Eigen::Index>(scheme.size());
    const auto N = n * n;
    if (relaxation.rows() != N || relaxation.cols() != N)
        throw ValidationError("relaxation superoperator has the wrong dimension");
    VelocitySystem s;
    s.A0 = liouvillian(build_hamiltonian(scheme, 0.0), relaxation);
    const double scale = s.A0.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw DegenerateSteadyStateError("Liouvillian is zero; steady state is not unique");
    s.A0 /= scale;
    const Eigen::VectorXd g = velocity_gradient(scheme);
    s.D = Eigen::MatrixXcd::Zero(N, N);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) s.D(i + n * j, i + n * j) = cplx(0.0, -(g(i) - g(j)) / scale);
    s.A0.row(0).setZero();
    s.D.row(0).setZero();
    for (Eigen::Index i = 0; i < n; ++i) s.A0(0, i + n * i) = 1.0;
    s.b = Eigen::VectorXcd::Zero(N);
    s.b(0) = 1.0;
    const auto& p = scheme.probe();
    s.ul = static_cast<Eigen::Index>(p.upper + scheme.size() * p.lower);
    s.lu = static_cast<Eigen::Index>(p.lower + scheme.size() * p.upper);
    return s;
}

cplx coherence_at(const VelocitySystem& s, double v) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s.A0 + v * s.D);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream os;
        os << "steady state is not unique at velocity " << v << " m/s";
        throw DegenerateSteadyStateError(os.str());
    }
    Eigen::VectorXcd x = lu.solve(s.b);
    if (!x.allFinite()) throw SolverError("steady-state solve produced non-finite values");
    return 0.5 * (x(s.ul) + std::conj(x(s.lu)));
}

VelocityGrid gaussian_grid(double sigma, std::size_t n_points, double span) {
    VelocityGrid g;
    g.nodes.resize(n_points);
    g.weights.resize(n_points);
    const double vmax = span * sigma;
    const double h = 2.0 * vmax / static_cast<double>(n_points - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        // symmetric by construction: node i and node n-1-i are exact negatives
        const double k = static_cast<double>(i) - 0.5 * static_cast<double>(n_points - 1);
        const double v = k * h;
        g.nodes[i] = v;
        double w = std::exp(-0.5 * (v / sigma) * (v / sigma));
        if (i == 0 || i + 1 == n_points) w *= 0.5;
        g.weights[i] = w;
    }
    for (std::size_t i = 0; i < n_points; ++i) sum += g.weights[i];
    for (auto& w : g.weights) w /= sum;
    return g;
}

// <1/(1 + v lambda)> over a zero-mean Gaussian of width sigma
cplx thermal_mean_inverse(cplx lambda, double sigma) {
    if (std::abs(lambda) * sigma < 1e-9) return 1.0;
    const cplx p = -1.0 / lambda;
    const double s2 = std::sqrt(2.0) * sigma;
    const cplx z = p / s2;
    const cplx I(0.0, 1.0);
    const double c = std::sqrt(units::pi) / s2;
    cplx mean_inv_v_minus_p;
    if (p.imag() >= 0.0)
        mean_inv_v_minus_p = I * c * faddeeva_w(z);
    else
        mean_inv_v_minus_p = -I * c * std::conj(faddeeva_w(std::conj(z)));
    return mean_inv_v_minus_p / lambda;
}

constexpr std::size_t fallback_points = 16001;

}  // namespace

double thermal_velocity_sigma(double temperature, double mass) {
    if (!(temperature > 0.0) || !(mass > 0.0) || !std::isfinite(temperature) || !std::isfinite(mass))
        throw ValidationError("temperature and mass must be positive");
    return std::sqrt(units::boltzmann * temperature / mass);
}

VelocityGrid make_velocity_grid(double temperature, double mass, std::size_t n_points, double span) {
    const double sigma = thermal_velocity_sigma(temperature, mass);
    if (n_points < 3 || n_points % 2 == 0) throw ValidationError("velocity grid needs an odd number of points >= 3");
    if (!(span >= 3.0) || !std::isfinite(span)) throw ValidationError("velocity span must be >= 3 thermal widths");
    VelocityGrid g = gaussian_grid(sigma, n_points, span);
    g.temperature = temperature;
    g.atomic_mass = mass;
    return g;
}

void validate(const CellConditions& c) {
    for (double x : {c.temperature, c.length, c.probe_diameter, c.coupling_diameter, c.atomic_mass})
        if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("cell conditions must be positive");
    if (!(c.density >= 0.0) || !std::isfinite(c.density)) throw ValidationError("density must be >= 0");
}

cplx grid_probe_coherence(const LadderScheme& scheme, const Eigen::MatrixXcd& relaxation, const VelocityGrid& grid) {
    if (grid.nodes.size() != grid.weights.size() || grid.nodes.empty())
        throw ValidationError("velocity grid nodes and weights differ in length");
    const auto sys = velocity_system(scheme, relaxation);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        try {
            acc += grid.weights[i] * coherence_at(sys, grid.nodes[i]);
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (velocity " << grid.nodes[i] << " m/s)";
            throw SolverError(os.str());
        }
    }
    return acc;
}

cplx thermal_probe_coherence(const LadderScheme& scheme, const Eigen::MatrixXcd& relaxation, double sigma_v) {
    if (!(sigma_v >= 0.0) || !std::isfinite(sigma_v)) throw ValidationError("velocity width must be >= 0");
    const auto sys = velocity_system(scheme, relaxation);
    if (sigma_v == 0.0) return coherence_at(sys, 0.0);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu0(sys.A0);
    if (!(lu0.rcond() > 1e-14)) throw DegenerateSteadyStateError("steady state is not unique at velocity 0");
    const Eigen::VectorXcd x0 = lu0.solve(sys.b);
    const Eigen::MatrixXcd K = lu0.solve(sys.D);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K);
    bool ok = es.info() == Eigen::Success;
    cplx rho_ul = 0.0, rho_lu = 0.0;
    if (ok) {
        const auto& V = es.eigenvectors();
        Eigen::PartialPivLU<Eigen::MatrixXcd> luv(V);
        ok = luv.rcond() > 1e-10;
        if (ok) {
            const Eigen::VectorXcd y = luv.solve(x0);
            for (Eigen::Index k = 0; k < y.size(); ++k) {
                const cplx m = thermal_mean_inverse(es.eigenvalues()(k), sigma_v);
                rho_ul += V(sys.ul, k) * y(k) * m;
                rho_lu += V(sys.lu, k) * y(k) * m;
            }
            ok = std::isfinite(rho_ul.real()) && std::isfinite(rho_ul.imag()) && std::isfinite(rho_lu.real()) &&
                 std::isfinite(rho_lu.imag());
        }
    }
    if (!ok) {
        const auto grid = gaussian_grid(sigma_v, fallback_points, 5.0);
        return grid_probe_coherence(scheme, relaxation, grid);
    }
    return 0.5 * (rho_ul + std::conj(rho_lu));
}

namespace {

ProbeResponse response_from_coherence(cplx coh, const LadderScheme& scheme, const CellConditions& c) {
    ProbeResponse r;
    r.coherence = coh;
    r.susceptibility = probe_susceptibility(coh, scheme, c.density * scheme.absorber_fraction, scheme.probe_dipole);
    const double k = std::abs(scheme.probe().wavevector);
    if (!(k > 0.0)) throw ValidationError("probe wavevector must be nonzero");
    r.absorption = k * r.susceptibility.imag();
    r.phase = 0.5 * k * r.susceptibility.real() * c.length;
    r.transmission = std::exp(-r.absorption * c.length);
    r.amplitude = std::exp(cplx(-0.5 * r.absorption * c.length, r.phase));
    return r;
}

cplx averaged_coherence(const LadderScheme& scheme, const Eigen::MatrixXcd& L, const CellConditions& c,
                        const DopplerSettings& d) {
    switch (d.method) {
        case DopplerMethod::none:
            return probe_coherence(steady_state(build_hamiltonian(scheme, 0.0), L).rho, scheme);
        case DopplerMethod::quadrature:
            return grid_probe_coherence(
                scheme, L, make_velocity_grid(c.temperature, c.atomic_mass, d.velocity_points, d.velocity_span));
        case DopplerMethod::analytic:
        default:
            return thermal_probe_coherence(scheme, L, thermal_velocity_sigma(c.temperature, c.atomic_mass));
    }
}

std::string describe(double detuning) {
    std::ostringstream os;
    os << " (probe detuning " << units::hertz(detuning) << " Hz)";
    return os.str();
}

}  // namespace

ProbeResponse probe_response(const LadderScheme& scheme, const DephasingBudget& budget,
                             const CellConditions& conditions, const DopplerSettings& doppler) {
    validate(conditions);
    const Eigen::MatrixXcd L = build_relaxation(scheme, budget);
    return response_from_coherence(averaged_coherence(scheme, L, conditions, doppler), scheme, conditions);
}

std::vector<cplx> SpectralTrace::amplitude() const {
    std::vector<cplx> out(transmission.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::exp(cplx(-0.5 * absorption[i] * conditions.length, phase[i]));
    return out;
}

namespace {

template <class Coherence>
SpectralTrace make_trace(const LadderScheme& scheme, const CellConditions& conditions,
                         const std::vector<double>& detuning_grid, unsigned threads, Coherence coherence) {
    validate(scheme);
    validate(conditions);
    if (detuning_grid.empty()) throw ValidationError("detuning grid is empty");
    for (std::size_t i = 1; i < detuning_grid.size(); ++i)
        if (!(detuning_grid[i] > detuning_grid[i - 1])) throw ValidationError("detuning grid must be increasing");
    SpectralTrace t;
    t.detunings = detuning_grid;
    t.scheme = scheme;
    t.conditions = conditions;
    const std::size_t m = detuning_grid.size();
    t.transmission.resize(m);
    t.absorption.resize(m);
    t.phase.resize(m);
    parallel_for(m, threads, [&](std::size_t i) {
        LadderScheme s = scheme;
        s.couplings[s.probe_index].detuning = detuning_grid[i];
        ProbeResponse r;
        try {
            r = response_from_coherence(coherence(s), s, conditions);
        } catch (const ValidationError&) {
            throw;
        } catch (const Error& e) {
            throw SolverError(std::string(e.what()) + describe(detuning_grid[i]));
        }
        t.transmission[i] = r.transmission;
        t.absorption[i] = r.absorption;
        t.phase[i] = r.phase;
    });
    return t;
}

}  // namespace

SpectralTrace doppler_averaged_trace(const LadderScheme& scheme, const DephasingBudget& budget,
                                     const CellConditions& conditions, const VelocityGrid& grid,
                                     const std::vector<double>& detuning_grid, unsigned threads) {
    const Eigen::MatrixXcd L = build_relaxation(scheme, budget);
    return make_trace(scheme, conditions, detuning_grid, threads,
                      [&](const LadderScheme& s) { return grid_probe_coherence(s, L, grid); });
}

SpectralTrace doppler_averaged_trace(const LadderScheme& scheme, const DephasingBudget& budget,
                                     const CellConditions& conditions, const DopplerSettings& doppler,
                                     const std::vector<double>& detuning_grid, unsigned threads) {
    const Eigen::MatrixXcd L = build_relaxation(scheme, budget);
    if (doppler.method == DopplerMethod::quadrature) {
        const auto grid =
            make_velocity_grid(conditions.temperature, conditions.atomic_mass, doppler.velocity_points,
                               doppler.velocity_span);
        return make_trace(scheme, conditions, detuning_grid, threads,
                          [&](const LadderScheme& s) { return grid_probe_coherence(s, L, grid); });
    }
    return make_trace(scheme, conditions, detuning_grid, threads,
                      [&](const LadderScheme& s) { return averaged_coherence(s, L, conditions, doppler); });
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
    if (points < 2) throw ValidationError("grid needs at least two points");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw ValidationError("grid endpoints must be finite");
    std::vector<double> g(points);
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = start + step * static_cast<double>(i);
    g.back() = stop;
    return g;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return (m % 2) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// median of the outer 10% (5% on each side, at least one point per side)
double outer_baseline(const std::vector<double>& y, std::vector<double>* outer = nullptr) {
    const std::size_t m = y.size();
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.05 * static_cast<double>(m))));
    std::vector<double> o;
    for (std::size_t i = 0; i < k; ++i) {
        o.push_back(y[i]);
        o.push_back(y[m - 1 - i]);
    }
    if (outer) *outer = o;
    return median(o);
}

void check_xy(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("x and y differ in length");
    if (x.size() < 5) throw ValidationError("need at least 5 samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw ValidationError("x must be increasing");
}

// vertex of the parabola through three points
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double a = (d2 - d1) / (x2 - x0);
    if (a == 0.0) return x1;
    const double xv = 0.5 * (x0 + x1) - d1 / (2.0 * a);
    return std::clamp(xv, x0, x2);
}

}  // namespace

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
    check_xy(x, y);
    std::vector<double> outer;
    const double base = outer_baseline(y, &outer);
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] - base;
    const auto ip = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    const double peak = z[ip];
    double noise = 0.0;
    for (double o : outer) noise = std::max(noise, std::abs(o - base));
    if (!(peak > 0.0) || !(peak > 2.0 * noise)) throw NoPeakError("no peak above the baseline noise floor");
    const double hm = 0.5 * peak;
    std::size_t j = ip;
    while (j > 0 && z[j] > hm) --j;
    if (z[j] > hm) throw NoPeakError("left half-maximum crossing lies outside the grid");
    const double xl = x[j] + (hm - z[j]) * (x[j + 1] - x[j]) / (z[j + 1] - z[j]);
    j = ip;
    while (j + 1 < z.size() && z[j] > hm) ++j;
    if (z[j] > hm) throw NoPeakError("right half-maximum crossing lies outside the grid");
    const double xr = x[j - 1] + (hm - z[j - 1]) * (x[j] - x[j - 1]) / (z[j] - z[j - 1]);
    return xr - xl;
}

double fwhm(const SpectralTrace& trace) { return units::hertz(fwhm(trace.detunings, trace.transmission)); }

AtPeaks find_at_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_dip) {
    check_xy(x, y);
    if (!(min_dip > 0.0 && min_dip < 1.0)) throw ValidationError("min_dip must lie in (0, 1)");
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) maxima.push_back(i);
    if (maxima.size() < 2) throw UnresolvedSplittingError("fewer than two peaks; splitting is not resolved");
    std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
    std::size_t a = std::min(maxima[0], maxima[1]);
    std::size_t b = std::max(maxima[0], maxima[1]);
    // prominence against the deepest point of the trace; the outer baseline
    // sits above the doublet when the wings are the transparent part
    const double base = *std::min_element(y.begin(), y.end());
    const double lower_peak = std::min(y[a], y[b]);
    double dip = y[a];
    for (std::size_t i = a; i <= b; ++i) dip = std::min(dip, y[i]);
    const double height = lower_peak - base;
    if (!(height > 0.0) || (lower_peak - dip) < min_dip * height)
        throw UnresolvedSplittingError("dip between peaks is too shallow; splitting is not resolved");
    AtPeaks p;
    p.peak1 = parabola_vertex(x[a - 1], y[a - 1], x[a], y[a], x[a + 1], y[a + 1]);
    p.peak2 = parabola_vertex(x[b - 1], y[b - 1], x[b], y[b], x[b + 1], y[b + 1]);
    p.splitting = std::abs(p.peak2 - p.peak1);
    return p;
}

AtPeaks find_at_peaks(const SpectralTrace& trace, double min_dip) {
    std::vector<double> y(trace.absorption.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = -trace.absorption[i];
    AtPeaks p = find_at_peaks(trace.detunings, y, min_dip);
    p.splitting = units::hertz(p.splitting);
    return p;
}

double doppler_fwhm(double wavevector, double temperature, double mass) {
    return fwhm_per_sigma * std::abs(wavevector) * thermal_velocity_sigma(temperature, mass) / units::two_pi;
}

}  // namespace rydsense
