// linalg.hpp: dense complex linear algebra for system-sized operators
// (Hermitian eigensolver, interaction-picture transform, state functionals).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "oqs/errors.hpp"

namespace oqs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Eigenvalues ascending, eigenvectors as the columns of a unitary.
template <typename Real>
struct SpectralDecompositionT {
    using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    Eigen::Index dim() const { return eigenvalues.size(); }

    template <typename Derived>
    ComplexMatrix to_eigenbasis(const Eigen::MatrixBase<Derived>& a) const {
        return eigenvectors.adjoint() * a * eigenvectors;
    }

    template <typename Derived>
    ComplexMatrix to_original(const Eigen::MatrixBase<Derived>& a) const {
        return eigenvectors * a * eigenvectors.adjoint();
    }

    ComplexMatrix reconstruct() const {
        return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
               eigenvectors.adjoint();
    }
};

using SpectralDecomposition = SpectralDecompositionT<double>;

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermiticity_error: matrix must be square");
    }
    if (m.size() == 0) return 0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

// One complex Jacobi rotation zeroing a(p,q).
template <typename Real>
void jacobi_rotate(Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& a,
                   Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& v,
                   Eigen::Index p, Eigen::Index q) {
    using C = std::complex<Real>;
    const C apq = a(p, q);
    const Real mag = std::abs(apq);
    const C phase = apq / mag;
    const Real theta = (a(q, q).real() - a(p, p).real()) / (Real(2) * mag);
    Real t = Real(1) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
    if (theta < 0) t = -t;
    const Real c = Real(1) / std::sqrt(t * t + Real(1));
    const Real s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q)
    const C jpp = c;
    const C jpq = s;
    const C jqp = -s * std::conj(phase);
    const C jqq = c * std::conj(phase);

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const C akp = a(k, p);
        const C akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const C apk = a(p, k);
        const C aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const C vkp = v(k, p);
        const C vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
    a(p, q) = C(0);
    a(q, p) = C(0);
    a(p, p) = C(a(p, p).real(), 0);
    a(q, q) = C(a(q, q).real(), 0);
}

}  // namespace detail

// Cyclic Jacobi diagonalization of a Hermitian matrix. Eigenvalues come out
// ascending; each eigenvector is rotated so its largest-magnitude component is
// real and positive. Throws on non-Hermitian input or when the rotation budget
// (100 d^2) is exhausted.
template <typename Derived>
SpectralDecompositionT<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
herm_eig(const Eigen::MatrixBase<Derived>& m, double hermitian_tol = 1e-10) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    using C = std::complex<Real>;
    using Matrix = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

    if (m.rows() != m.cols()) {
        throw std::invalid_argument("herm_eig: matrix must be square");
    }
    const Eigen::Index n = m.rows();
    Matrix a = m.template cast<C>();
    if (n > 0 && hermiticity_error(a) > hermitian_tol * std::max<Real>(Real(1), a.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("herm_eig: matrix is not Hermitian");
    }
    a = (a + a.adjoint()) / Real(2);
    Matrix v = Matrix::Identity(n, n);

    const Real scale = std::max<Real>(Real(1), a.norm());
    const Real tol = Real(1e-12) * scale;
    const long long budget = 100LL * n * n;
    long long rotations = 0;

    auto off_norm = [&]() {
        Real sum = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) sum += std::norm(a(p, q));
        return std::sqrt(Real(2) * sum);
    };

    while (off_norm() > tol) {
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= std::numeric_limits<Real>::min()) continue;
                detail::jacobi_rotate(a, v, p, q);
                if (++rotations > budget) {
                    throw NumericalError("herm_eig: Jacobi iteration did not converge within " +
                                         std::to_string(budget) + " rotations");
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

    SpectralDecompositionT<Real> sd;
    sd.eigenvalues.resize(n);
    sd.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        sd.eigenvalues(k) = a(src, src).real();
        auto col = v.col(src);
        const Real biggest = col.cwiseAbs().maxCoeff();
        Eigen::Index pivot = 0;
        while (std::abs(col(pivot)) < biggest * (Real(1) - Real(1e-12))) ++pivot;
        const C fix = std::conj(col(pivot)) / std::abs(col(pivot));
        sd.eigenvectors.col(k) = col * fix;
    }
    return sd;
}

// e^{iHt} A e^{-iHt} with H given by its spectral decomposition.
template <typename Derived>
CMatrix interaction_transform(const Eigen::MatrixBase<Derived>& a, const SpectralDecomposition& sd, double t) {
    if (a.rows() != a.cols() || a.rows() != sd.dim()) {
        throw std::invalid_argument("interaction_transform: dimension mismatch");
    }
    CMatrix ae = sd.to_eigenbasis(a);
    const Eigen::Index n = sd.dim();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            ae(i, j) *= std::exp(kI * ((sd.eigenvalues(i) - sd.eigenvalues(j)) * t));
    return sd.to_original(ae);
}

template <typename DA, typename DB>
CMatrix commutator(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    return a * b - b * a;
}

// Von Neumann entropy in nats. Eigenvalues in [-1e-6, 0] count as zero;
// anything more negative is reported as an unphysical state.
template <typename Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("von_neumann_entropy: matrix must be square");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-6) {
        throw std::invalid_argument("von_neumann_entropy: trace must be 1");
    }
    const auto sd = herm_eig(rho, 1e-8);
    if (sd.eigenvalues.size() > 0 && sd.eigenvalues(0) < -1e-6) {
        throw UnphysicalStateError("von_neumann_entropy: eigenvalue " + std::to_string(sd.eigenvalues(0)) +
                                   " below -1e-6");
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        const double p = sd.eigenvalues(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

// Entropy of a possibly slightly non-positive matrix: eigenvalues <= 0 are
// dropped instead of rejected. The smallest eigenvalue is reported through
// min_eigenvalue when given.
template <typename Derived>
double clipped_entropy(const Eigen::MatrixBase<Derived>& rho, double* min_eigenvalue = nullptr) {
    const auto sd = herm_eig(rho, 1e-6);
    double s = 0.0;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        const double p = sd.eigenvalues(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    if (min_eigenvalue) *min_eigenvalue = sd.eigenvalues.size() ? sd.eigenvalues(0) : 0.0;
    return s;
}

template <typename DA, typename DB>
double trace_distance(const Eigen::MatrixBase<DA>& rho1, const Eigen::MatrixBase<DB>& rho2) {
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    const CMatrix diff = rho1.template cast<Complex>() - rho2.template cast<Complex>();
    const auto sd = herm_eig(diff, 1e-8);
    return 0.5 * sd.eigenvalues.cwiseAbs().sum();
}

}  // namespace oqs
