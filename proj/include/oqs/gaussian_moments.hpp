// gaussian_moments.hpp: direct evaluation of the Bargmann Gaussian integrals
// that define the bath moments, used to arbitrate moments_from_fock.
//
// A bath operator phi enters through f(z*, z') = <z|phi|z'>, with
// <z|n> = prod z*^n / sqrt(n!). The average is
//   M[h] = int dmu(z) dmu(z') h(z, z*, z', z'*) f(z*, z') e^{z'* z},
// dmu(z) = e^{-|z|^2} d^2z / pi per mode, and the moments use the prefactors
//   T: 1,  A_q: z_q,  A_hat_q: z'*_q,  B_qp: z_q z'*_p,  C_qp: z_q z'_p.

#pragma once

#include "oqs/fock.hpp"

namespace oqs {

enum class MomentKind { T, A, A_hat, B, C };

struct GaussianMomentResult {
    Complex wick;
    Complex quadrature;
};

// Both routes; throws NumericalError when they differ by more than 1e-6.
GaussianMomentResult gaussian_moment_both(const FockOperator& phi, MomentKind kind, int q = 0, int p = 0);

// Wick value of the above (the quadrature cross-check runs as well).
Complex gaussian_moment_oracle(const FockOperator& phi, MomentKind kind, int q = 0, int p = 0);

// Single-mode M[z^a z*^b z'^c z'*^d] by Isserlis pairings and by 4D Gauss-Hermite.
double wick_monomial(int a, int b, int c, int d);
Complex quadrature_monomial(int a, int b, int c, int d);

// int dmu(z) e^{w* z} z*^p z^n by 2D Gauss-Hermite of the given order.
Complex bargmann_integral(int p, int n, Complex w, int order = 40);

// Nodes and weights for int e^{-x^2} f(x) dx (Golub-Welsch).
std::pair<RVector, RVector> gauss_hermite(int order);

}  // namespace oqs
