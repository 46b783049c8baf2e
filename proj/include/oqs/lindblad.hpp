// lindblad.hpp: Markov and secular limit. Jump operators use the lowering
// convention L(w) = sum_{e' - e = w} P(e) L P(e'), so a positive w removes
// energy w from the system.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oqs/initial_state.hpp"

namespace oqs {

struct JumpOperator {
    double omega;
    CMatrix op;  // original basis
};
using JumpDecomposition = std::vector<JumpOperator>;

// Sorted by descending frequency; gaps closer than merge_tol are merged.
JumpDecomposition jump_operators(const SpectralDecomposition& sd, const CMatrix& L, double merge_tol = 1e-10);

struct PrincipalValueOptions {
    double omega_max{100.0};
    double rel_tol{1e-12};
    double excision{0.0};  // initial half-width; 0 picks min(w, w_max - w) / 8
};

struct PrincipalValueResult {
    double value;      // Richardson estimate from widths h, h/2, h/4
    double value_half; // same estimate started from h/2
    double excision;
};

// P int_0^{w_max} f(v) / (v - w) dv by symmetric excision plus Richardson
// elimination of the O(h) and O(h^3) excision errors. For w outside
// (0, w_max) the integrand is regular and integrated directly.
PrincipalValueResult principal_value(const std::function<double(double)>& f, double omega,
                                     const PrincipalValueOptions& opt);

struct RateEntry {
    double omega;
    double re_gamma;     // pi J(w)
    double im_gamma;     // P int J(v) / (v - w) dv
    double re_gamma_beq; // pi J(w) n(w)
    double im_gamma_beq;
    double pv_stability; // relative change of im_gamma under excision halving
};

struct RateTable {
    std::vector<RateEntry> entries;
    std::vector<std::string> violations;  // nonzero A / C / off-diagonal B moments

    bool lindblad_form() const { return violations.empty(); }
    const RateEntry& at(double omega, double tol = 1e-10) const;
};

// Mean occupation per mode, n_q = sum_g Tr(phi_s^g) V_B^g[q,q].
RVector mean_occupation(const InitialState& state);

// n(v) by linear interpolation of occupations on the bath grid, 0 outside it.
std::function<double(double)> occupation_profile(const BathModel& bath, const RVector& n);

RateTable markov_rates(const SpectralDensity& J, const JumpDecomposition& jumps, const PrincipalValueOptions& opt,
                       const std::function<double(double)>& occupation = {});
RateTable markov_rates(const SpectralDensity& J, const JumpDecomposition& jumps, const PrincipalValueOptions& opt,
                       const InitialState& state, const BathModel& bath);

// Single-frequency rate; throws std::domain_error for w outside (0, w_max).
RateEntry rate_at(const SpectralDensity& J, double omega, const PrincipalValueOptions& opt,
                  const std::function<double(double)>& occupation = {});

// sum_w c(w)[L(w) rho, L(w)^dag] + c_B(w)[[L(w), rho], L(w)^dag] + H.c.,
// with c = Re - i Im. Throws if the table carries Lindblad violations.
CMatrix lindblad_rhs(const CMatrix& rho, const RateTable& rates, const JumpDecomposition& jumps);

// Schroedinger-picture RK4 of -i[H_S, rho] + lindblad_rhs, sampled every `stride` steps.
std::vector<CMatrix> lindblad_evolve(const CMatrix& rho0, const SystemSpec& system, const RateTable& rates,
                                     const JumpDecomposition& jumps, double dt, std::size_t steps,
                                     std::size_t stride = 1);

}  // namespace oqs
