#include "oqs/presets.hpp"

namespace oqs {

namespace {

double centre(double k0, double omega1) { return std::isnan(k0) ? omega1 : k0; }

CVector basis_vector(Eigen::Index d, Eigen::Index i) {
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    return v;
}

FockVector vacuum() { return FockVector{{OccupationIndex::vacuum(), Complex(1.0)}}; }

// (|0> + sum_k G_k |1_k>) / sqrt(2)
FockVector superposed_bath(const GaussianPacket& packet) {
    return Complex(1.0 / std::sqrt(2.0)) * (vacuum() + packet_state(packet));
}

GammaTerm product_term(const CVector& psi_s, double weight, const FockVector& psi_b, Eigen::Index n_modes,
                       int max_exc, std::string label) {
    FockOperator phi(static_cast<int>(n_modes), max_exc);
    phi.add_dyad(1.0, psi_b, psi_b);
    return make_term(weight * psi_s * psi_s.adjoint(), std::move(phi), n_modes, std::move(label));
}

// Entangled pure state: packet part first, then the vacuum part, so the terms
// come out as (packet,packet), (vac,vac), (vac,packet), (packet,vac).
std::vector<GammaTerm> entangled_terms(const CVector& s_packet, const CVector& s_vac, const GaussianPacket& packet,
                                       double weight, Eigen::Index n_modes, int max_exc, const std::string& prefix) {
    auto all = expand_pure_state({{s_packet, packet_state(packet), "p"}, {s_vac, vacuum(), "v"}}, weight, n_modes,
                                 max_exc, prefix);
    // expand order: pp, pv, vp, vv
    std::vector<GammaTerm> out{std::move(all[0]), std::move(all[3]), std::move(all[2]), std::move(all[1])};
    for (std::size_t g = 0; g < out.size(); ++g) out[g].label = prefix + "g" + std::to_string(g);
    return out;
}

}  // namespace

FockVector packet_state(const GaussianPacket& packet) {
    FockVector v;
    for (Eigen::Index k = 0; k < packet.amplitudes.size(); ++k)
        if (packet.amplitudes(k) != Complex(0.0)) v[OccupationIndex::single(static_cast<int>(k))] = packet.amplitudes(k);
    return v;
}

Scenario build_example1(PresetKind kind, const Example1Params& p, const BathModel& bath) {
    if (kind == PresetKind::DC) throw std::invalid_argument("example 1 has no DC variant");
    Scenario sc;
    sc.system = v_atom_system(p.omega1, p.omega2, p.epsilon_L, p.omega_L);
    const Eigen::Index n = bath.size();
    const auto packet = gaussian_packet(bath, centre(p.k0, p.omega1), p.sigma);
    const CVector g = basis_vector(3, 0), e1 = basis_vector(3, 1), e2 = basis_vector(3, 2);

    if (kind == PresetKind::NSL) {
        sc.state = make_initial_state(entangled_terms(p.C * g, p.A * e1 + p.B * e2, packet, 1.0, n, p.max_exc, ""));
    } else {
        const CVector psi = p.A * e1 + p.B * e2 + p.C * g;
        sc.state = make_initial_state({product_term(psi, 1.0, superposed_bath(packet), n, p.max_exc, "sl")});
    }
    return sc;
}

Scenario build_example2(PresetKind kind, const Example2Params& p, const BathModel& bath) {
    Scenario sc;
    sc.system = two_level_system(p.omega1);
    const Eigen::Index n = bath.size();
    const CVector g = basis_vector(2, 0), e = basis_vector(2, 1);

    std::vector<GammaTerm> terms;
    if (kind == PresetKind::DC) {
        terms.push_back(product_term(p.A_dc * g + p.B_dc * e, 1.0, vacuum(), n, p.max_exc, "dc"));
    } else {
        for (std::size_t j = 0; j < 2; ++j) {
            const auto packet = gaussian_packet(bath, centre(p.k0, p.omega1), p.sigma[j]);
            const std::string prefix = "j" + std::to_string(j + 1);
            if (kind == PresetKind::NSL) {
                auto part = entangled_terms(p.A[j] * g, p.B[j] * e, packet, p.weight[j], n, p.max_exc, prefix);
                for (auto& t : part) terms.push_back(std::move(t));
            } else {
                terms.push_back(product_term(p.A[j] * g + p.B[j] * e, p.weight[j], superposed_bath(packet), n,
                                             p.max_exc, prefix));
            }
        }
    }
    sc.state = make_initial_state(std::move(terms));
    return sc;
}

Scenario build_example3(PresetKind kind, const Example3Params& p, const BathModel& bath) {
    if (kind == PresetKind::DC) throw std::invalid_argument("example 3 has no DC variant");
    Scenario sc;
    sc.system = two_level_system(p.omega1);
    const Eigen::Index n = bath.size();
    const auto packet = gaussian_packet(bath, centre(p.k0, p.omega1), p.sigma);
    const CVector g = basis_vector(2, 0), e = basis_vector(2, 1);
    if (kind == PresetKind::NSL) {
        sc.state = make_initial_state(entangled_terms(p.A * g, p.B * e, packet, 1.0, n, p.max_exc, ""));
    } else {
        sc.state = make_initial_state({product_term(p.A * g + p.B * e, 1.0, superposed_bath(packet), n, p.max_exc, "sl")});
    }
    return sc;
}

}  // namespace oqs
