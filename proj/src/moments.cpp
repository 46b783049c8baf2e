#include "oqs/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace oqs {

namespace {

// Single nonzero position of v, or -1.
Eigen::Index single_support(const CVector& v) {
    Eigen::Index pos = -1;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) == Complex(0.0)) continue;
        if (pos >= 0) return -1;
        pos = i;
    }
    return pos;
}

// (a_q psi)_m for every intermediate occupation m, as dense vectors over q.
std::map<OccupationIndex, CVector> lowered(const FockVector& psi, Eigen::Index n) {
    std::map<OccupationIndex, CVector> out;
    for (const auto& [occ, c] : psi) {
        for (const auto& [mode, count] : occ.entries()) {
            auto [it, fresh] = out.try_emplace(*occ.shifted(mode, -1));
            if (fresh) it->second = CVector::Zero(n);
            it->second(mode) += c * std::sqrt(static_cast<double>(count));
        }
    }
    return out;
}

}  // namespace

void KernelMatrix::add_factor(const CVector& u, const CVector& v) {
    if (u.size() != n_ || v.size() != n_) throw std::invalid_argument("KernelMatrix: factor length mismatch");
    if (dense_) {
        *dense_ += u * v.transpose();
        return;
    }
    const Eigen::Index iu = single_support(u);
    const Eigen::Index iv = single_support(v);
    if (iu >= 0 && iu == iv) {
        diag_(iu) += u(iu) * v(iv);
        return;
    }
    if (iu < 0 && u.isZero(0.0)) return;
    if (iv < 0 && v.isZero(0.0)) return;
    factors_.emplace_back(u, v);
}

void KernelMatrix::compact() {
    if (dense_ || 2 * static_cast<Eigen::Index>(factors_.size()) <= n_) return;
    dense_ = dense();
    factors_.clear();
    diag_ = CVector::Zero(n_);
}

Complex KernelMatrix::operator()(Eigen::Index q, Eigen::Index p) const {
    if (dense_) return (*dense_)(q, p);
    Complex s = (q == p) ? diag_(q) : Complex(0.0);
    for (const auto& [u, v] : factors_) s += u(q) * v(p);
    return s;
}

CVector KernelMatrix::diagonal() const {
    if (dense_) return dense_->diagonal();
    CVector d = diag_;
    for (const auto& [u, v] : factors_) d.array() += u.array() * v.array();
    return d;
}

CMatrix KernelMatrix::dense() const {
    if (dense_) return *dense_;
    CMatrix m = diag_.asDiagonal();
    for (const auto& [u, v] : factors_) m += u * v.transpose();
    return m;
}

double KernelMatrix::max_abs() const {
    if (n_ == 0) return 0.0;
    if (!dense_ && factors_.empty()) return diag_.cwiseAbs().maxCoeff();
    return dense().cwiseAbs().maxCoeff();
}

double KernelMatrix::max_abs_offdiagonal() const {
    if (n_ == 0 || (!dense_ && factors_.empty())) return 0.0;
    CMatrix m = dense();
    m.diagonal().setZero();
    return m.cwiseAbs().maxCoeff();
}

bool MomentSet::only_equilibrium_moments(double tol) const {
    const bool a_zero = V_A.size() == 0 || (V_A.cwiseAbs().maxCoeff() <= tol && V_A_hat.cwiseAbs().maxCoeff() <= tol);
    return a_zero && V_C.max_abs() <= tol && V_B.max_abs_offdiagonal() <= tol;
}

MomentSet moments_from_fock(const FockOperator& phi, Eigen::Index n_modes) {
    if (phi.n_modes() > n_modes) {
        throw std::out_of_range("moments_from_fock: operator defined on more modes than the bath has");
    }
    phi.validate();

    MomentSet m;
    m.V_A = CVector::Zero(n_modes);
    m.V_A_hat = CVector::Zero(n_modes);
    m.V_B = KernelMatrix(n_modes);
    m.V_C = KernelMatrix(n_modes);

    for (const auto& d : phi.dyads()) {
        const Complex w = d.weight;
        m.T += w * inner(d.bra, d.ket);

        const auto low_ket = lowered(d.ket, n_modes);
        const auto low_bra = lowered(d.bra, n_modes);

        // V_A[q] = w <chi| a_q |psi>
        for (const auto& [occ, col] : low_ket) {
            auto it = d.bra.find(occ);
            if (it != d.bra.end()) m.V_A += w * std::conj(it->second) * col;
        }
        // V_A_hat[q] = w <a_q chi|psi>
        for (const auto& [occ, col] : low_bra) {
            auto it = d.ket.find(occ);
            if (it != d.ket.end()) m.V_A_hat += w * it->second * col.conjugate();
        }
        // V_B[q,p] = w sum_m (a_q psi)_m conj((a_p chi)_m)
        for (const auto& [occ, col] : low_ket) {
            auto it = low_bra.find(occ);
            if (it != low_bra.end()) m.V_B.add_factor(w * col, it->second.conjugate());
        }
        // V_C[q,p] = w sum_m conj((a_q^dag chi)_m) (a_p psi)_m, with
        // (a_q^dag chi)_m = sqrt(m_q) chi_{m - e_q}
        for (const auto& [occ, col] : low_ket) {
            CVector u = CVector::Zero(n_modes);
            for (const auto& [mode, count] : occ.entries()) {
                auto it = d.bra.find(*occ.shifted(mode, -1));
                if (it != d.bra.end()) u(mode) = std::sqrt(static_cast<double>(count)) * std::conj(it->second);
            }
            if (!u.isZero(0.0)) m.V_C.add_factor(w * u, col);
        }
    }
    m.V_B.compact();
    m.V_C.compact();
    return m;
}

}  // namespace oqs
