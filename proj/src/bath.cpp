#include "oqs/bath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oqs {

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) {
        throw std::invalid_argument("spectral density: negative frequency");
    }
    if (omega == 0.0) return 0.0;
    return strength * std::pow(omega, exponent) * std::exp(-omega / cutoff);
}

double eval_spectral_density(const SpectralDensity& j, double omega) { return j(omega); }

BathModel BathModel::in_rotating_frame(double omega_frame) const {
    BathModel shifted = *this;
    shifted.frequencies.array() -= omega_frame;
    return shifted;
}

BathModel discretize(const SpectralDensity& j, double omega_max, Eigen::Index n_modes) {
    if (n_modes < 1) throw std::invalid_argument("discretize: need at least one mode");
    if (!(omega_max > 0.0)) throw std::invalid_argument("discretize: omega_max must be positive");

    BathModel bath;
    bath.spacing = omega_max / static_cast<double>(n_modes);
    bath.frequencies.resize(n_modes);
    bath.couplings.resize(n_modes);
    for (Eigen::Index q = 0; q < n_modes; ++q) {
        const double w = static_cast<double>(q + 1) * bath.spacing;
        bath.frequencies(q) = w;
        bath.couplings(q) = std::sqrt(j(w) * bath.spacing);
    }
    return bath;
}

Complex alpha_corr(const BathModel& bath, double dt) {
    Complex sum{0.0, 0.0};
    for (Eigen::Index q = 0; q < bath.size(); ++q) {
        const double g = bath.couplings(q);
        sum += g * g * std::exp(-kI * (bath.frequencies(q) * dt));
    }
    return sum;
}

GaussianPacket gaussian_packet(const BathModel& bath, double k0, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");

    GaussianPacket packet;
    packet.center = k0;
    packet.width = sigma;
    packet.amplitudes.resize(bath.size());
    double norm2 = 0.0;
    bool any_resolved = false;
    for (Eigen::Index k = 0; k < bath.size(); ++k) {
        const double d = bath.frequencies(k) - k0;
        const double raw = std::exp(-d * d / (2.0 * sigma * sigma)) / (sigma * 2.0 * std::numbers::pi);
        if (raw >= 1e-300) any_resolved = true;
        packet.amplitudes(k) = std::sqrt(raw);
        norm2 += raw;
    }
    if (!any_resolved) {
        throw std::invalid_argument("gaussian_packet: packet centred at " + std::to_string(k0) +
                                    " lies entirely outside the bath grid");
    }
    packet.amplitudes /= std::sqrt(norm2);
    return packet;
}

}  // namespace oqs
