#include "oqs/correlations.hpp"

namespace oqs {

CorrelationContext::CorrelationContext(const SystemSpec& system, const BathModel& lab_bath)
    : bath(system.omega_frame == 0.0 ? lab_bath : lab_bath.in_rotating_frame(system.omega_frame)),
      sd(herm_eig(system.H)),
      L_eig(sd.to_eigenbasis(system.L)),
      Ldag_eig(L_eig.adjoint()) {
    if (system.L.rows() != system.H.rows()) throw std::invalid_argument("CorrelationContext: L and H_S dims differ");
}

Complex one_pole_integral(double x, double t) {
    const double theta = x * t;
    if (std::abs(theta) < 1e-3) {
        // sum_k (-i theta)^k / (k+1)!, truncated where the remainder is below 1e-20
        Complex term{1.0, 0.0}, sum{1.0, 0.0};
        for (int k = 1; k <= 6; ++k) {
            term *= Complex(0.0, -theta) / static_cast<double>(k + 1);
            sum += term;
        }
        return sum * t;
    }
    return (1.0 - std::exp(Complex(0.0, -theta))) / Complex(0.0, x);
}

namespace {

CVector phases(const BathModel& bath, double t) {
    CVector x(bath.size());
    for (Eigen::Index q = 0; q < bath.size(); ++q)
        x(q) = bath.couplings(q) * std::exp(Complex(0.0, -bath.frequencies(q) * t));
    return x;
}

// I(s * w_q + delta, t) for all q, using e^{-i s w_q t} supplied by the caller.
CVector one_pole_column(const RVector& w, const CVector& e_w, double sign, double delta, double t) {
    const Complex e_d = std::exp(Complex(0.0, -delta * t));
    CVector out(w.size());
    for (Eigen::Index q = 0; q < w.size(); ++q) {
        const double x = sign * w(q) + delta;
        if (std::abs(x * t) < 1e-3) {
            out(q) = one_pole_integral(x, t);
        } else {
            out(q) = (1.0 - e_w(q) * e_d) / Complex(0.0, x);
        }
    }
    return out;
}

}  // namespace

Complex corr_A(const CorrelationContext& ctx, const MomentSet& m, double t) {
    return kI * (phases(ctx.bath, t).array() * m.V_A.array()).sum();
}

Complex corr_A_hat(const CorrelationContext& ctx, const MomentSet& m, double t) {
    return -kI * (phases(ctx.bath, t).conjugate().array() * m.V_A_hat.array()).sum();
}

CorrelationPair corr_B(const CorrelationContext& ctx, const MomentSet& m, double t, double tau) {
    if (tau > t) throw std::invalid_argument("corr_B: tau must not exceed t");
    const CVector xt = phases(ctx.bath, t);
    const CVector xtau = phases(ctx.bath, tau);
    const Complex total = m.V_B.bilinear(xt, xtau.conjugate());
    const Complex eq = (xt.array() * xtau.conjugate().array() * m.V_B.diagonal().array()).sum();
    return {eq, total - eq};
}

Complex corr_C(const CorrelationContext& ctx, const MomentSet& m, double t, double tau) {
    if (tau > t) throw std::invalid_argument("corr_C: tau must not exceed t");
    return -m.V_C.bilinear(phases(ctx.bath, t), phases(ctx.bath, tau));
}

KernelTables::KernelTables(const CorrelationContext& ctx, double t)
    : ctx_(&ctx), t_(t), d_(ctx.dim()), x_(phases(ctx.bath, t)), xc_(x_.conjugate()) {
    const auto& w = ctx.bath.frequencies;
    const auto& eps = ctx.sd.eigenvalues;
    const RVector g2 = ctx.bath.couplings.array().square();
    e_w_.resize(w.size());
    for (Eigen::Index q = 0; q < w.size(); ++q) e_w_(q) = std::exp(Complex(0.0, -w(q) * t));

    plus_.resize(static_cast<std::size_t>(d_ * d_));
    minus_.resize(plus_.size());
    k_alpha_ = CMatrix::Zero(d_, d_);
    for (Eigen::Index a = 0; a < d_; ++a) {
        for (Eigen::Index b = 0; b < d_; ++b) {
            plus_[idx(a, b)] = one_pole_column(w, e_w_, 1.0, eps(a) - eps(b), t);
            if (ctx.L_eig(a, b) != Complex(0.0))
                k_alpha_(a, b) = ctx.L_eig(a, b) * (g2.array().cast<Complex>() * plus_[idx(a, b)].array()).sum();
        }
    }
}

const CVector& KernelTables::minus(Eigen::Index a, Eigen::Index b) {
    CVector& col = minus_[idx(a, b)];
    if (col.size() == 0) {
        const auto& w = ctx_->bath.frequencies;
        col = one_pole_column(w, e_w_.conjugate(), -1.0,
                              ctx_->sd.eigenvalues(a) - ctx_->sd.eigenvalues(b), t_);
    }
    return col;
}

CMatrix KernelTables::b_kernel(const KernelMatrix& v_b) const {
    CMatrix k = CMatrix::Zero(d_, d_);
    for (Eigen::Index a = 0; a < d_; ++a)
        for (Eigen::Index b = 0; b < d_; ++b)
            if (ctx_->L_eig(a, b) != Complex(0.0))
                k(a, b) = ctx_->L_eig(a, b) * v_b.bilinear(x_, xc_.cwiseProduct(plus_[idx(a, b)]));
    return k;
}

CMatrix KernelTables::b_kernel_diagonal(const CVector& v_bqq) const {
    const CVector weights = ctx_->bath.couplings.array().square().cast<Complex>() * v_bqq.array();
    CMatrix k = CMatrix::Zero(d_, d_);
    for (Eigen::Index a = 0; a < d_; ++a)
        for (Eigen::Index b = 0; b < d_; ++b)
            if (ctx_->L_eig(a, b) != Complex(0.0))
                k(a, b) = ctx_->L_eig(a, b) * (weights.array() * plus_[idx(a, b)].array()).sum();
    return k;
}

CMatrix KernelTables::c_kernel(const KernelMatrix& v_c) {
    CMatrix k = CMatrix::Zero(d_, d_);
    for (Eigen::Index a = 0; a < d_; ++a)
        for (Eigen::Index b = 0; b < d_; ++b)
            if (ctx_->Ldag_eig(a, b) != Complex(0.0))
                k(a, b) = -ctx_->Ldag_eig(a, b) * v_c.bilinear(x_, x_.cwiseProduct(minus(a, b)));
    return k;
}

CMatrix memory_op_alpha(const CorrelationContext& ctx, double t) {
    return ctx.sd.to_original(KernelTables(ctx, t).alpha_kernel());
}

CMatrix memory_op_B(const CorrelationContext& ctx, const MomentSet& m, double t) {
    return ctx.sd.to_original(KernelTables(ctx, t).b_kernel(m.V_B));
}

CMatrix memory_op_C(const CorrelationContext& ctx, const MomentSet& m, double t) {
    KernelTables tables(ctx, t);
    return ctx.sd.to_original(tables.c_kernel(m.V_C));
}

}  // namespace oqs
