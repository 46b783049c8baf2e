// oracle.hpp: exact reference dynamics of system plus discretized bath in a
// Fock space truncated at a total excitation number.

#pragma once

#include <Eigen/Sparse>

#include <map>
#include <vector>

#include "oqs/evolution.hpp"

namespace oqs {

// Product states (system level s, bath occupation b) at index b * d + s. Bath
// occupations are ordered by total excitation, lexicographically within one.
struct TotalBasis {
    Eigen::Index d{0};
    int n_modes{0};
    int max_exc{0};
    std::vector<OccupationIndex> bath_states;
    std::map<OccupationIndex, Eigen::Index> bath_lookup;

    Eigen::Index size() const { return d * static_cast<Eigen::Index>(bath_states.size()); }
    Eigen::Index index(Eigen::Index bath, Eigen::Index s) const { return bath * d + s; }
    Eigen::Index index(const OccupationIndex& occ, Eigen::Index s) const;  // -1 when outside
};

// d * sum_{m<=max_exc} C(N+m-1, m) states; OracleLimitError above `cap`.
TotalBasis enumerate_basis(int n_modes, int max_exc, Eigen::Index d, std::size_t cap = 50000);

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

// H_S (x) 1 + 1 (x) sum w a^dag a + B^dag (x) L + B (x) L^dag, ladder
// operators truncated to the basis. `bath` frequencies are used as given.
SparseCMatrix build_total_hamiltonian_sparse(const SystemSpec& system, const BathModel& bath,
                                             const TotalBasis& basis);
CMatrix build_total_hamiltonian(const SystemSpec& system, const BathModel& bath, const TotalBasis& basis);

struct ExactOptions {
    Eigen::Index dense_cap{2500};  // spectral propagation up to this size, Krylov above
    double krylov_tol{1e-11};
    std::size_t basis_cap{50000};
};

// rho_tot(0) on the basis (throws if the state needs occupations outside it).
CMatrix total_initial_state(const InitialState& state, const TotalBasis& basis);

// rho_s(t) = Tr_B[U rho_tot(0) U^dag] at ascending, non-negative times.
std::vector<CMatrix> exact_evolve(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                                  int max_exc, const std::vector<double>& times, const ExactOptions& opt = {});

// Full propagated state (dense path only), for unitarity checks.
CMatrix exact_total_state(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                          int max_exc, double t);

struct LeakageReport {
    double max_change{0.0};
    bool converged{true};
};

// Reruns at max_exc + 1 and compares every rho_s entry against `reference`.
LeakageReport check_truncation(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                               int max_exc, const std::vector<double>& times, const std::vector<CMatrix>& reference,
                               double threshold = 5e-4, const ExactOptions& opt = {});

struct Comparison {
    double max_distance{0.0};
    std::vector<double> distance;
};

Comparison compare(const Trajectory& me, const std::vector<CMatrix>& exact);

}  // namespace oqs
