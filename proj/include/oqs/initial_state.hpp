// initial_state.hpp: rho_tot(0) = sum_g phi_s^g (x) phi_B^g, its bath moments
// and the SL / NSL / equilibrium / Lindblad classification.

#pragma once

#include <string>
#include <vector>

#include "oqs/bath.hpp"
#include "oqs/moments.hpp"

namespace oqs {

// System Hamiltonian, coupling operator L (H_int = B^dag L + B L^dag) and the
// inversion operator used for the emission rate. Bath frequencies are taken in
// a frame rotating at omega_frame.
struct SystemSpec {
    std::string type;  // "two_level" or "v_atom"
    CMatrix H;
    CMatrix L;
    CMatrix sigma_z;
    double omega_frame{0.0};

    Eigen::Index dim() const { return H.rows(); }
};

SystemSpec two_level_system(double omega1);
// Levels (g, e1, e2); detunings are measured from omega_L.
SystemSpec v_atom_system(double omega1, double omega2, double epsilon_L, double omega_L = 0.0);

struct GammaTerm {
    CMatrix phi_s;
    FockOperator phi_b;
    MomentSet moments;          // of phi_b
    MomentSet adjoint_moments;  // of phi_b^dag
    std::string label;
};

GammaTerm make_term(CMatrix phi_s, FockOperator phi_b, Eigen::Index n_modes, std::string label);

struct InitialState {
    std::vector<GammaTerm> terms;
    std::vector<std::size_t> adjoint_pairing;  // g -> g' with phi^{g'} = (phi^g)^dag

    Eigen::Index n_modes() const { return terms.empty() ? 0 : terms.front().moments.size(); }
    Complex total_trace() const;
    CMatrix reduced_state() const;  // sum_g T^g phi_s^g
};

// Finds the adjoint pairing; throws std::invalid_argument("inconsistent adjoint
// pairing ...") when some term has no partner.
std::vector<std::size_t> find_adjoint_pairing(const std::vector<GammaTerm>& terms, double tol = 1e-10);

// Assembles terms, pairs them and checks sum_g T^g Tr phi_s^g = 1.
InitialState make_initial_state(std::vector<GammaTerm> terms, double norm_tol = 1e-8);

struct Classification {
    bool is_SL{false};
    bool is_NSL{false};
    bool all_bath_equilibrium{false};
    bool lindblad_in_markov_secular{false};
    std::string report;
};

Classification classify(const InitialState& state);

// Moment-level Lindblad criterion with a per-violation report.
std::pair<bool, std::string> lindblad_condition(const InitialState& state);

CMatrix initial_rho_component(const GammaTerm& term);

// Pure state sum_i |s_i>|b_i> expanded into the dyad terms (i, j), scaled by weight.
struct PureComponent {
    CVector system;
    FockVector bath;
    std::string tag;
};
std::vector<GammaTerm> expand_pure_state(const std::vector<PureComponent>& parts, double weight,
                                         Eigen::Index n_modes, int max_exc, const std::string& prefix);

}  // namespace oqs
