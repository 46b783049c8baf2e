// evolution.hpp: fixed-step RK4 integration of the gamma-component master
// equation and the observables recorded along a trajectory.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oqs/correlations.hpp"

namespace oqs {

enum class ReducedPath { Auto, ForceGeneral, ForceEquilibrium };

struct EvolutionConfig {
    double dt{2.5e-3};
    double t_max{10.0};
    std::size_t record_stride{1};
    ReducedPath reduced_path{ReducedPath::Auto};
    bool store_components{false};

    std::size_t snapshot_count() const;
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CMatrix> rho;                      // original basis
    std::vector<std::vector<CMatrix>> components;  // only when requested
    std::vector<RVector> populations;
    std::vector<double> sigma_z;
    std::vector<double> entropy;  // negative eigenvalues clipped to zero
    std::vector<double> min_eigenvalue;
    std::vector<double> rate;
    std::vector<double> trace_err;
    std::vector<double> hermiticity_err;
    std::vector<double> max_component_trace_drift;
    std::vector<std::string> warnings;
};

// Right-hand side for every component of a state, evaluated in the H_S
// eigenbasis. Memory kernels are cached per distinct time.
class MasterEquation {
public:
    MasterEquation(const SystemSpec& system, const BathModel& lab_bath, const InitialState& state,
                   ReducedPath path = ReducedPath::Auto);

    const CorrelationContext& context() const { return ctx_; }
    std::size_t size() const { return terms_.size(); }
    bool uses_equilibrium_path(std::size_t g) const { return terms_[g].equilibrium; }

    // Initial components T^g phi_s^g in the eigenbasis.
    std::vector<CMatrix> initial_components() const;

    // d rho^g / dt for component g at time t (eigenbasis in and out).
    CMatrix rhs(std::size_t g, const CMatrix& rho_g, double t);
    void rhs_all(const std::vector<CMatrix>& rho, double t, std::vector<CMatrix>& out);

    CMatrix sigma_z_eig() const { return sigma_z_eig_; }

private:
    struct Term {
        CMatrix phi_s_eig;
        const GammaTerm* source;
        bool equilibrium;
        bool has_c;
        bool has_c_adj;
    };
    struct Kernels {
        Complex A, A_hat;
        CMatrix K_B, K_C, K_B_adj, K_C_adj;
    };
    void prepare(double t);

    CorrelationContext ctx_;
    CMatrix sigma_z_eig_;
    std::vector<Term> terms_;
    std::optional<KernelTables> tables_;
    std::vector<Kernels> kernels_;
};

CMatrix rhs_gamma(const CMatrix& rho_g, double t, const SystemSpec& system, const BathModel& bath,
                  const GammaTerm& term);

Trajectory evolve(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                  const EvolutionConfig& cfg);

// R = -Tr[sigma_z drho/dt]
double emission_rate(const CMatrix& rho_rhs, const CMatrix& sigma_z);
double population(const CMatrix& rho, Eigen::Index level);

}  // namespace oqs
