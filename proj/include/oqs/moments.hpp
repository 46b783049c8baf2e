// moments.hpp: bath moments of a Fock operator phi_B and the low-rank kernel
// matrices that carry the two-mode moments.
//
// With phi = sum w |psi><chi| the moments are
//   T        = Tr phi
//   V_A[q]   = Tr[a_q phi]          V_A_hat[q] = Tr[a_q^dag phi]
//   V_B[q,p] = Tr[a_p^dag a_q phi]  V_C[q,p]   = Tr[a_q a_p phi]
// The index order of V_B is the one the Bargmann-integral oracle produces.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "oqs/fock.hpp"

namespace oqs {

// M = sum_r u_r v_r^T + diag(d), or a dense matrix when the factor list
// would be larger than the matrix itself.
class KernelMatrix {
public:
    KernelMatrix() = default;
    explicit KernelMatrix(Eigen::Index n) : n_(n), diag_(CVector::Zero(n)) {}

    Eigen::Index size() const { return n_; }

    void add_factor(const CVector& u, const CVector& v);
    void add_diagonal(Eigen::Index q, Complex c) { dense_ ? (*dense_)(q, q) += c : diag_(q) += c; }

    // Converts to dense storage once the rank exceeds n/2.
    void compact();

    Complex operator()(Eigen::Index q, Eigen::Index p) const;
    CVector diagonal() const;
    CMatrix dense() const;

    // x^T M y
    template <typename DX, typename DY>
    Complex bilinear(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) const {
        if (dense_) return (x.transpose() * (*dense_) * y).value();
        Complex s = (diag_.array() * x.array() * y.array()).sum();
        for (const auto& [u, v] : factors_) s += (u.array() * x.array()).sum() * (v.array() * y.array()).sum();
        return s;
    }

    std::size_t rank() const { return dense_ ? static_cast<std::size_t>(n_) : factors_.size(); }
    bool is_dense() const { return dense_.has_value(); }
    const std::vector<std::pair<CVector, CVector>>& factors() const { return factors_; }

    double max_abs() const;
    double max_abs_offdiagonal() const;

private:
    Eigen::Index n_{0};
    CVector diag_;
    std::vector<std::pair<CVector, CVector>> factors_;
    std::optional<CMatrix> dense_;
};

struct MomentSet {
    Complex T{0.0, 0.0};
    CVector V_A;
    CVector V_A_hat;
    KernelMatrix V_B;
    KernelMatrix V_C;

    Eigen::Index size() const { return V_A.size(); }

    // True when only T and the diagonal of V_B can be nonzero.
    bool only_equilibrium_moments(double tol = 1e-14) const;
};

MomentSet moments_from_fock(const FockOperator& phi, Eigen::Index n_modes);

}  // namespace oqs
