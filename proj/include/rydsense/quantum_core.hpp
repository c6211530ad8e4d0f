#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rydsense {

using cplx = std::complex<double>;

struct DecayBranch {
    std::size_t target{0};
    double rate{0.0};  // rad/s
};

struct Level {
    std::string label;
    double population_decay_out{0.0};  // rad/s, total; the part not covered by branches goes to level 0
    std::vector<DecayBranch> decay_branches;
    bool rydberg{false};
};

enum class CouplingKind { optical, rf };

struct Coupling {
    std::size_t lower{0};
    std::size_t upper{1};
    double rabi{0.0};        // rad/s
    double detuning{0.0};    // rad/s
    double wavevector{0.0};  // rad/m, signed along the probe axis
    CouplingKind kind{CouplingKind::optical};
};

struct LadderScheme {
    std::vector<Level> levels;
    std::vector<Coupling> couplings;
    std::size_t probe_index{0};

    // absorber data for the probe transition
    double probe_dipole{0.0};           // C m
    double absorber_fraction{1.0};      // fraction of the atoms in the probed ground state

    std::size_t size() const { return levels.size(); }
    const Coupling& probe() const { return couplings.at(probe_index); }
};

// Throws StructuralError / ValidationError.
void validate(const LadderScheme& scheme);

// Budget terms that can be assigned to a coherence. Transit is a global
// reset channel and is not part of the assignment.
enum BudgetTerm : unsigned {
    term_none = 0,
    term_collisional = 1u << 0,
    term_laser = 1u << 1,
    term_magnetic = 1u << 2,
    term_rydberg_rydberg = 1u << 3,
};

using CoherenceKey = std::pair<std::size_t, std::size_t>;  // (i, j) with i < j

// All rates are FWHM linewidths in rad/s. A linewidth w damps the matching
// coherence at w/2; transit resets every level toward the ground state at w/2.
struct DephasingBudget {
    double transit{0.0};
    double collisional{0.0};
    double laser{0.0};
    double magnetic{0.0};
    double rydberg_rydberg{0.0};
    // empty map: default_assignment(scheme) is used
    std::map<CoherenceKey, unsigned> assignment;
};

void validate(const DephasingBudget& budget, const LadderScheme& scheme);

// Laser linewidth on every ground coherence, collisional, magnetic and
// Rydberg-Rydberg terms on every coherence that involves a Rydberg level.
std::map<CoherenceKey, unsigned> default_assignment(const LadderScheme& scheme);

// Effective coherence damping rate (rad/s) for the (i, j) coherence.
double coherence_dephasing(const DephasingBudget& budget,
                           const std::map<CoherenceKey, unsigned>& assignment,
                           std::size_t i, std::size_t j);

struct SteadyState {
    Eigen::MatrixXcd rho;

    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
};

// Column-major vectorization: rho(i, j) <-> i + n * j.
inline std::size_t vec_index(std::size_t i, std::size_t j, std::size_t n) { return i + n * j; }

Eigen::MatrixXcd build_hamiltonian(const LadderScheme& scheme, double velocity);

// Diagonal of dH/dv (real), i.e. minus the cumulative wavevector per level.
Eigen::VectorXd velocity_gradient(const LadderScheme& scheme);

Eigen::MatrixXcd build_relaxation(const LadderScheme& scheme, const DephasingBudget& budget);

// -i[H, .] + L on the vectorized density matrix
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L);

SteadyState steady_state(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L);

// max-abs of (-i[H, rho] + L rho)
double liouvillian_residual(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho);

cplx probe_coherence(const Eigen::MatrixXcd& rho, const LadderScheme& scheme);

// Linear susceptibility of the probe from the coherence rho(upper, lower).
cplx probe_susceptibility(cplx coherence, const LadderScheme& scheme, double density, double probe_dipole);

// Intensity absorption coefficient (1/m).
double probe_absorption(const SteadyState& state, const LadderScheme& scheme, double density, double probe_dipole);

}  // namespace rydsense
