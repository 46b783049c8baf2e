// bath.hpp: spectral densities, discretized bosonic baths, the bath
// correlation function and Gaussian single-photon wave packets.

#pragma once

#include "oqs/linalg.hpp"

namespace oqs {

// J(w) = strength * w^exponent * exp(-w / cutoff)
struct SpectralDensity {
    double strength{0.005};
    double exponent{0.5};
    double cutoff{5.0};

    double operator()(double omega) const;
};

double eval_spectral_density(const SpectralDensity& j, double omega);

// Discrete modes w_q = q * spacing (q = 1..N) with real couplings g_q.
struct BathModel {
    RVector frequencies;
    RVector couplings;
    double spacing{0.0};

    Eigen::Index size() const { return frequencies.size(); }
    double omega_max() const { return spacing * static_cast<double>(size()); }

    // Same couplings, every frequency shifted by -omega_frame (rotating frame).
    BathModel in_rotating_frame(double omega_frame) const;
};

// g_q^2 = J(w_q) * dw on the grid w_q = q * w_max / N.
BathModel discretize(const SpectralDensity& j, double omega_max, Eigen::Index n_modes);

// alpha(dt) = sum_q g_q^2 exp(-i w_q dt)
Complex alpha_corr(const BathModel& bath, double dt);

struct GaussianPacket {
    CVector amplitudes;
    double center{0.0};
    double width{1.0};
};

// G_k proportional to sqrt(exp(-(w_k - k0)^2 / 2 sigma^2) / (2 pi sigma)) on the
// bath grid, rescaled so that sum_k |G_k|^2 = 1.
GaussianPacket gaussian_packet(const BathModel& bath, double k0, double sigma);

}  // namespace oqs
