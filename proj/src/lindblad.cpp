#include "oqs/lindblad.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oqs {

JumpDecomposition jump_operators(const SpectralDecomposition& sd, const CMatrix& L, double merge_tol) {
    const CMatrix le = sd.to_eigenbasis(L);
    const auto& eps = sd.eigenvalues;
    const double scale = std::max(1.0, le.cwiseAbs().maxCoeff());

    std::vector<double> gaps;
    for (Eigen::Index a = 0; a < le.rows(); ++a)
        for (Eigen::Index b = 0; b < le.cols(); ++b)
            if (std::abs(le(a, b)) > 1e-14 * scale) gaps.push_back(eps(b) - eps(a));
    std::sort(gaps.begin(), gaps.end(), std::greater<>());

    JumpDecomposition out;
    for (double w : gaps) {
        if (!out.empty() && std::abs(out.back().omega - w) <= merge_tol) continue;
        out.push_back({w, CMatrix()});
    }
    std::vector<CMatrix> blocks(out.size(), CMatrix::Zero(le.rows(), le.cols()));
    for (Eigen::Index a = 0; a < le.rows(); ++a) {
        for (Eigen::Index b = 0; b < le.cols(); ++b) {
            if (std::abs(le(a, b)) <= 1e-14 * scale) continue;
            const double w = eps(b) - eps(a);
            for (std::size_t k = 0; k < out.size(); ++k) {
                if (std::abs(out[k].omega - w) <= merge_tol) {
                    blocks[k](a, b) = le(a, b);
                    break;
                }
            }
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k].op = sd.to_original(blocks[k]);
    return out;
}

namespace {

double integrate(const std::function<double(double)>& g, double a, double b, double tol) {
    if (b <= a) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(g, a, b, tol);
}

}  // namespace

PrincipalValueResult principal_value(const std::function<double(double)>& f, double omega,
                                     const PrincipalValueOptions& opt) {
    auto integrand = [&](double v) { return f(v) / (v - omega); };
    if (omega <= 0.0 || omega >= opt.omega_max) {
        if (omega == opt.omega_max && f(omega) != 0.0) {
            throw std::domain_error("principal_value: pole on the upper integration limit");
        }
        const double v = integrate(integrand, 0.0, opt.omega_max, opt.rel_tol);
        return {v, v, 0.0};
    }

    const double h0 = opt.excision > 0.0 ? opt.excision : std::min(omega, opt.omega_max - omega) / 8.0;
    auto outer = [&](double h) {
        return integrate(integrand, 0.0, omega - h, opt.rel_tol) +
               integrate(integrand, omega + h, opt.omega_max, opt.rel_tol);
    };
    // F(h) = PV - a h - b h^3 + O(h^5)
    auto richardson = [&](double f1, double f2, double f3) {
        const double g1 = 2.0 * f2 - f1;
        const double g2 = 2.0 * f3 - f2;
        return (8.0 * g2 - g1) / 7.0;
    };
    const double f1 = outer(h0), f2 = outer(h0 / 2), f3 = outer(h0 / 4), f4 = outer(h0 / 8);
    return {richardson(f1, f2, f3), richardson(f2, f3, f4), h0};
}

const RateEntry& RateTable::at(double omega, double tol) const {
    for (const auto& e : entries)
        if (std::abs(e.omega - omega) <= tol) return e;
    throw std::out_of_range("RateTable: no entry for the requested frequency");
}

RVector mean_occupation(const InitialState& state) {
    RVector n = RVector::Zero(state.n_modes());
    for (const auto& t : state.terms) n += (t.phi_s.trace() * t.moments.V_B.diagonal()).real();
    return n;
}

std::function<double(double)> occupation_profile(const BathModel& bath, const RVector& n) {
    if (n.size() != bath.size()) throw std::invalid_argument("occupation_profile: size mismatch");
    RVector w = bath.frequencies;
    RVector occ = n;
    return [w, occ](double v) {
        const Eigen::Index m = w.size();
        if (m == 0 || v < w(0) || v > w(m - 1)) return 0.0;
        if (m == 1) return occ(0);
        const auto* begin = w.data();
        const auto* it = std::upper_bound(begin, begin + m, v);
        Eigen::Index i = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(it - begin) - 1, 0, m - 2);
        const double s = (v - w(i)) / (w(i + 1) - w(i));
        return (1.0 - s) * occ(i) + s * occ(i + 1);
    };
}

namespace {

RateEntry compute_rate(const SpectralDensity& J, double omega, const PrincipalValueOptions& opt,
                       const std::function<double(double)>& occupation) {
    auto jfun = [&](double v) { return v <= 0.0 ? 0.0 : J(v); };
    RateEntry e{};
    e.omega = omega;
    const bool inside = omega > 0.0 && omega < opt.omega_max;
    e.re_gamma = inside ? std::numbers::pi * J(omega) : 0.0;
    const auto pv = principal_value(jfun, omega, opt);
    e.im_gamma = pv.value;
    e.pv_stability = pv.value != 0.0 ? std::abs(pv.value - pv.value_half) / std::abs(pv.value) : 0.0;
    if (occupation) {
        auto jn = [&](double v) { return jfun(v) * occupation(v); };
        e.re_gamma_beq = inside ? std::numbers::pi * J(omega) * occupation(omega) : 0.0;
        e.im_gamma_beq = principal_value(jn, omega, opt).value;
    }
    return e;
}

}  // namespace

RateTable markov_rates(const SpectralDensity& J, const JumpDecomposition& jumps, const PrincipalValueOptions& opt,
                       const std::function<double(double)>& occupation) {
    RateTable table;
    for (const auto& j : jumps) table.entries.push_back(compute_rate(J, j.omega, opt, occupation));
    return table;
}

RateTable markov_rates(const SpectralDensity& J, const JumpDecomposition& jumps, const PrincipalValueOptions& opt,
                       const InitialState& state, const BathModel& bath) {
    const RVector n = mean_occupation(state);
    RateTable table = markov_rates(J, jumps, opt, n.isZero(0.0) ? std::function<double(double)>{}
                                                                 : occupation_profile(bath, n));
    auto [ok, report] = lindblad_condition(state);
    if (!ok) {
        std::istringstream is(report);
        for (std::string line; std::getline(is, line);)
            if (!line.empty()) table.violations.push_back(line.substr(line.find_first_not_of(' ')));
    }
    return table;
}

RateEntry rate_at(const SpectralDensity& J, double omega, const PrincipalValueOptions& opt,
                  const std::function<double(double)>& occupation) {
    if (!(omega > 0.0 && omega < opt.omega_max)) {
        std::ostringstream os;
        os << "rate requested at omega = " << omega << " outside (0, " << opt.omega_max << ")";
        throw std::domain_error(os.str());
    }
    return compute_rate(J, omega, opt, occupation);
}

CMatrix lindblad_rhs(const CMatrix& rho, const RateTable& rates, const JumpDecomposition& jumps) {
    if (!rates.lindblad_form()) {
        throw std::invalid_argument("lindblad_rhs: state does not qualify for the Lindblad limit (" +
                                    rates.violations.front() + ")");
    }
    auto half = [&](const CMatrix& x) {
        CMatrix out = CMatrix::Zero(x.rows(), x.cols());
        for (const auto& j : jumps) {
            const auto& r = rates.at(j.omega);
            const Complex c(r.re_gamma, -r.im_gamma);
            const Complex cb(r.re_gamma_beq, -r.im_gamma_beq);
            const CMatrix jd = j.op.adjoint();
            out += c * commutator(j.op * x, jd);
            if (cb != Complex(0.0)) out += cb * commutator(commutator(j.op, x), jd);
        }
        return out;
    };
    return half(rho) + half(rho.adjoint()).adjoint();
}

std::vector<CMatrix> lindblad_evolve(const CMatrix& rho0, const SystemSpec& system, const RateTable& rates,
                                     const JumpDecomposition& jumps, double dt, std::size_t steps,
                                     std::size_t stride) {
    auto f = [&](const CMatrix& r) -> CMatrix { return -kI * commutator(system.H, r) + lindblad_rhs(r, rates, jumps); };
    std::vector<CMatrix> out{rho0};
    CMatrix rho = rho0;
    for (std::size_t n = 1; n <= steps; ++n) {
        const CMatrix k1 = f(rho);
        const CMatrix k2 = f(rho + 0.5 * dt * k1);
        const CMatrix k3 = f(rho + 0.5 * dt * k2);
        const CMatrix k4 = f(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (n % stride == 0) out.push_back(rho);
    }
    return out;
}

}  // namespace oqs
