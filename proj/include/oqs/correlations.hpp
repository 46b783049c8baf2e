// correlations.hpp: bath correlation functions of one gamma-component and the
// memory operators K(t) = int_0^t K(t,tau) V_{tau-t} X dtau they generate.
//
// With x_q(t) = g_q e^{-i w_q t}:
//   A(t)        =  i sum_q x_q V_A[q]
//   A_hat(t)    = -i sum_q conj(x_q) V_A_hat[q]
//   B(t,tau)    =  sum_{q,p} x_q(t) conj(x_p(tau)) V_B[q,p]
//   C(t,tau)    = -sum_{q,p} x_q(t) x_p(tau) V_C[q,p]
// The tau integrals are done in closed form in the H_S eigenbasis.

#pragma once

#include <vector>

#include "oqs/initial_state.hpp"

namespace oqs {

struct CorrelationContext {
    BathModel bath;  // frequencies in the system's rotating frame
    SpectralDecomposition sd;
    CMatrix L_eig;
    CMatrix Ldag_eig;

    CorrelationContext(const SystemSpec& system, const BathModel& lab_bath);
    Eigen::Index dim() const { return sd.dim(); }
};

// I(x,t) = int_0^t e^{-i x s} ds = (1 - e^{-ixt}) / (ix), series near xt = 0.
Complex one_pole_integral(double x, double t);

struct CorrelationPair {
    Complex eq;
    Complex neq;
};

Complex corr_A(const CorrelationContext& ctx, const MomentSet& m, double t);
Complex corr_A_hat(const CorrelationContext& ctx, const MomentSet& m, double t);
CorrelationPair corr_B(const CorrelationContext& ctx, const MomentSet& m, double t, double tau);
Complex corr_C(const CorrelationContext& ctx, const MomentSet& m, double t, double tau);

// Per-time tables shared by every component: phases and the one-pole
// integrals I(w_q + D_ab, t) and I(D_ab - w_q, t) for all eigenbasis pairs.
class KernelTables {
public:
    KernelTables(const CorrelationContext& ctx, double t);

    double time() const { return t_; }
    const CVector& x() const { return x_; }
    const CVector& x_conj() const { return xc_; }
    const CVector& plus(Eigen::Index a, Eigen::Index b) const { return plus_[idx(a, b)]; }
    const CVector& minus(Eigen::Index a, Eigen::Index b);  // computed on first use

    // Operators in the H_S eigenbasis.
    const CMatrix& alpha_kernel() const { return k_alpha_; }
    CMatrix b_kernel(const KernelMatrix& v_b) const;
    CMatrix b_kernel_diagonal(const CVector& v_bqq) const;
    CMatrix c_kernel(const KernelMatrix& v_c);

private:
    std::size_t idx(Eigen::Index a, Eigen::Index b) const { return static_cast<std::size_t>(a * d_ + b); }

    const CorrelationContext* ctx_;
    double t_;
    Eigen::Index d_;
    CVector x_, xc_;
    CVector e_w_;  // e^{-i w_q t}
    std::vector<CVector> plus_;
    std::vector<CVector> minus_;
    CMatrix k_alpha_;
};

// Memory operators returned in the original basis.
CMatrix memory_op_alpha(const CorrelationContext& ctx, double t);
CMatrix memory_op_B(const CorrelationContext& ctx, const MomentSet& m, double t);
CMatrix memory_op_C(const CorrelationContext& ctx, const MomentSet& m, double t);

}  // namespace oqs
