#include "rydsense/quantum_core.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "rydsense/errors.hpp"
#include "rydsense/units.hpp"

namespace rydsense {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

struct Edge {
    std::size_t other;
    std::size_t coupling;
};

std::vector<std::vector<Edge>> adjacency(const LadderScheme& scheme) {
    std::vector<std::vector<Edge>> adj(scheme.size());
    for (std::size_t c = 0; c < scheme.couplings.size(); ++c) {
        const auto& cp = scheme.couplings[c];
        adj[cp.lower].push_back({cp.upper, c});
        adj[cp.upper].push_back({cp.lower, c});
    }
    return adj;
}

// Cumulative diagonal: each coupling contributes `step(c)` going lower -> upper.
template <class Step>
std::vector<double> cumulative(const LadderScheme& scheme, Step step) {
    const std::size_t n = scheme.size();
    std::vector<double> e(n, 0.0);
    std::vector<bool> seen(n, false);
    auto adj = adjacency(scheme);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        auto a = q.front();
        q.pop();
        for (const auto& ed : adj[a]) {
            if (seen[ed.other]) continue;
            const auto& cp = scheme.couplings[ed.coupling];
            double s = step(cp);
            e[ed.other] = (ed.other == cp.upper) ? e[a] + s : e[a] - s;
            seen[ed.other] = true;
            q.push(ed.other);
        }
    }
    return e;
}

}  // namespace

void validate(const LadderScheme& scheme) {
    const std::size_t n = scheme.size();
    if (n < 2) throw StructuralError("ladder needs at least two levels");
    if (scheme.couplings.size() != n - 1) {
        std::ostringstream os;
        os << "ladder with " << n << " levels needs " << n - 1 << " couplings, got " << scheme.couplings.size();
        throw StructuralError(os.str());
    }
    std::vector<int> degree(n, 0);
    for (const auto& cp : scheme.couplings) {
        if (cp.lower >= cp.upper || cp.upper >= n)
            throw StructuralError("coupling needs lower < upper < number of levels");
        if (!finite_nonneg(cp.rabi)) throw ValidationError("Rabi frequency must be finite and >= 0");
        if (!std::isfinite(cp.detuning) || !std::isfinite(cp.wavevector))
            throw ValidationError("detuning and wavevector must be finite");
        if (++degree[cp.lower] > 2 || ++degree[cp.upper] > 2)
            throw StructuralError("level appears in more than two couplings");
    }
    std::vector<bool> seen(n, false);
    auto adj = adjacency(scheme);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        auto a = q.front();
        q.pop();
        for (const auto& ed : adj[a])
            if (!seen[ed.other]) {
                seen[ed.other] = true;
                ++count;
                q.push(ed.other);
            }
    }
    if (count != n) throw StructuralError("coupling graph is not connected");

    for (std::size_t i = 0; i < n; ++i) {
        const auto& lv = scheme.levels[i];
        if (!finite_nonneg(lv.population_decay_out))
            throw ValidationError("level '" + lv.label + "': decay rate must be finite and >= 0");
        double sum = 0.0;
        for (const auto& br : lv.decay_branches) {
            if (!finite_nonneg(br.rate)) throw ValidationError("level '" + lv.label + "': negative branch rate");
            if (br.target >= n || br.target == i)
                throw ValidationError("level '" + lv.label + "': invalid decay branch target");
            sum += br.rate;
        }
        if (sum > lv.population_decay_out * (1.0 + 1e-12))
            throw ValidationError("level '" + lv.label + "': branch rates exceed total decay");
        if (i == 0 && lv.population_decay_out > sum * (1.0 + 1e-12))
            throw ValidationError("ground level decay must be fully assigned to branches");
    }
    if (scheme.probe_index >= scheme.couplings.size()) throw ValidationError("probe_index out of range");
    if (scheme.probe().kind != CouplingKind::optical) throw ValidationError("probe coupling must be optical");
    if (!finite_nonneg(scheme.probe_dipole)) throw ValidationError("probe dipole must be >= 0");
    if (!(scheme.absorber_fraction >= 0.0 && scheme.absorber_fraction <= 1.0))
        throw ValidationError("absorber fraction must lie in [0, 1]");
}

void validate(const DephasingBudget& b, const LadderScheme& scheme) {
    for (double r : {b.transit, b.collisional, b.laser, b.magnetic, b.rydberg_rydberg})
        if (!finite_nonneg(r)) throw ValidationError("dephasing rates must be finite and >= 0");
    const std::size_t n = scheme.size();
    if (b.assignment.empty()) return;
    for (const auto& [key, mask] : b.assignment) {
        if (key.first >= key.second || key.second >= n)
            throw ValidationError("assignment keys must be (i, j) with i < j < n");
        (void)mask;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((scheme.levels[i].rydberg || scheme.levels[j].rydberg) && !b.assignment.count({i, j})) {
                std::ostringstream os;
                os << "assignment does not cover Rydberg coherence (" << i << "," << j << ")";
                throw ValidationError(os.str());
            }
}

std::map<CoherenceKey, unsigned> default_assignment(const LadderScheme& scheme) {
    std::map<CoherenceKey, unsigned> out;
    const std::size_t n = scheme.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            unsigned mask = term_none;
            if (i == 0) mask |= term_laser;
            if (scheme.levels[i].rydberg || scheme.levels[j].rydberg)
                mask |= term_collisional | term_magnetic | term_rydberg_rydberg;
            out[{i, j}] = mask;
        }
    return out;
}

double coherence_dephasing(const DephasingBudget& b, const std::map<CoherenceKey, unsigned>& assignment,
                           std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    auto it = assignment.find({i, j});
    if (it == assignment.end()) return 0.0;
    unsigned m = it->second;
    double w = 0.0;
    if (m & term_collisional) w += b.collisional;
    if (m & term_laser) w += b.laser;
    if (m & term_magnetic) w += b.magnetic;
    if (m & term_rydberg_rydberg) w += b.rydberg_rydberg;
    return 0.5 * w;
}

Eigen::MatrixXcd build_hamiltonian(const LadderScheme& scheme, double velocity) {
    validate(scheme);
    const std::size_t n = scheme.size();
    auto diag = cumulative(scheme, [velocity](const Coupling& c) { return c.detuning - c.wavevector * velocity; });
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) H(i, i) = diag[i];
    for (const auto& c : scheme.couplings) {
        H(c.lower, c.upper) = -0.5 * c.rabi;
        H(c.upper, c.lower) = -0.5 * c.rabi;
    }
    return H;
}

Eigen::VectorXd velocity_gradient(const LadderScheme& scheme) {
    validate(scheme);
    auto g = cumulative(scheme, [](const Coupling& c) { return -c.wavevector; });
    return Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

Eigen::MatrixXcd build_relaxation(const LadderScheme& scheme, const DephasingBudget& budget) {
    validate(scheme);
    validate(budget, scheme);
    const std::size_t n = scheme.size();
    const std::size_t N = n * n;
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(N, N);
    auto idx = [n](std::size_t i, std::size_t j) { return vec_index(i, j, n); };

    // spontaneous decay, Lindblad operators sqrt(g)|b><a|
    for (std::size_t a = 0; a < n; ++a) {
        const auto& lv = scheme.levels[a];
        const double total = lv.population_decay_out;
        if (total == 0.0) continue;
        double rest = total;
        for (const auto& br : lv.decay_branches) {
            L(idx(br.target, br.target), idx(a, a)) += br.rate;
            rest -= br.rate;
        }
        if (a != 0 && rest > 0.0) L(idx(0, 0), idx(a, a)) += rest;
        for (std::size_t j = 0; j < n; ++j) {
            L(idx(a, j), idx(a, j)) -= 0.5 * total;
            L(idx(j, a), idx(j, a)) -= 0.5 * total;
        }
    }

    const auto assignment = budget.assignment.empty() ? default_assignment(scheme) : budget.assignment;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double g = coherence_dephasing(budget, assignment, i, j);
            if (g == 0.0) continue;
            L(idx(i, j), idx(i, j)) -= g;
            L(idx(j, i), idx(j, i)) -= g;
        }

    // transit: every element decays, the lost trace reappears in the ground state
    if (budget.transit > 0.0) {
        const double r = 0.5 * budget.transit;
        for (std::size_t k = 0; k < N; ++k) L(k, k) -= r;
        for (std::size_t i = 0; i < n; ++i) L(idx(0, 0), idx(i, i)) += r;
    }
    return L;
}

Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L) {
    const auto n = H.rows();
    Eigen::MatrixXcd M = L;
    const cplx mi(0.0, -1.0);
    // -i (I (x) H - H^T (x) I)
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b) {
                if (H(a, b) != 0.0) M(a + n * j, b + n * j) += mi * H(a, b);
                if (H(b, a) != 0.0) M(j + n * a, j + n * b) -= mi * H(b, a);
            }
    return M;
}

SteadyState steady_state(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L) {
    const auto n = H.rows();
    const auto N = n * n;
    if (H.cols() != n || L.rows() != N || L.cols() != N) throw ValidationError("H and L dimensions do not match");
    Eigen::MatrixXcd A = liouvillian(H, L);
    const double scale = A.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw DegenerateSteadyStateError("Liouvillian is zero; steady state is not unique");
    A /= scale;
    A.row(0).setZero();
    for (Eigen::Index i = 0; i < n; ++i) A(0, i + n * i) = 1.0;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(N);
    b(0) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    // rcond() is only an estimate and misses exact zero pivots
    const auto piv = lu.matrixLU().diagonal().cwiseAbs();
    const double rc = std::min(lu.rcond(), piv.minCoeff() / piv.maxCoeff());
    if (!(rc > 1e-14)) {
        std::ostringstream os;
        os << "steady state is not unique (reciprocal condition " << rc << ")";
        throw DegenerateSteadyStateError(os.str());
    }
    Eigen::VectorXcd x = lu.solve(b);
    if (!x.allFinite()) throw SolverError("steady-state solve produced non-finite values");

    Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), n, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return SteadyState{rho};
}

double liouvillian_residual(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho) {
    const auto n = rho.rows();
    Eigen::MatrixXcd r = cplx(0.0, -1.0) * (H * rho - rho * H);
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
    Eigen::VectorXcd lv = L * v;
    r += Eigen::Map<Eigen::MatrixXcd>(lv.data(), n, n);
    return r.cwiseAbs().maxCoeff();
}

double SteadyState::trace_error() const { return std::abs(rho.trace() - cplx(1.0, 0.0)); }

double SteadyState::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double SteadyState::min_eigenvalue() const {
    Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

cplx probe_coherence(const Eigen::MatrixXcd& rho, const LadderScheme& scheme) {
    const auto& p = scheme.probe();
    return rho(static_cast<Eigen::Index>(p.upper), static_cast<Eigen::Index>(p.lower));
}

cplx probe_susceptibility(cplx coherence, const LadderScheme& scheme, double density, double probe_dipole) {
    const double rabi = scheme.probe().rabi;
    if (!(rabi > 0.0)) throw ValidationError("probe Rabi frequency must be > 0 to convert coherence to susceptibility");
    if (!finite_nonneg(density) || !finite_nonneg(probe_dipole))
        throw ValidationError("density and probe dipole must be >= 0");
    return 2.0 * density * probe_dipole * probe_dipole / (units::epsilon0 * units::hbar * rabi) * coherence;
}

double probe_absorption(const SteadyState& state, const LadderScheme& scheme, double density, double probe_dipole) {
    const double k = std::abs(scheme.probe().wavevector);
    if (!(k > 0.0)) throw ValidationError("probe wavevector must be nonzero");
    return k * probe_susceptibility(probe_coherence(state.rho, scheme), scheme, density, probe_dipole).imag();
}

}  // namespace rydsense
