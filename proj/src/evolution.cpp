#include "oqs/evolution.hpp"

#include <cmath>
#include <sstream>

namespace oqs {

std::size_t EvolutionConfig::snapshot_count() const {
    return static_cast<std::size_t>(std::floor(t_max / (dt * static_cast<double>(record_stride)) + 1e-9)) + 1;
}

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("evolve: t_max must be non-negative");
    if (record_stride < 1) throw std::invalid_argument("evolve: record_stride must be at least 1");
}

namespace {

constexpr double kTraceFloor = 1e-12;

CMatrix comm(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

// (e^{-iHt} X e^{iHt}) in the eigenbasis.
CMatrix free_propagate(const CMatrix& x, const RVector& eps, double t) {
    CMatrix out = x;
    for (Eigen::Index a = 0; a < x.rows(); ++a)
        for (Eigen::Index b = 0; b < x.cols(); ++b) out(a, b) *= std::exp(Complex(0.0, -(eps(a) - eps(b)) * t));
    return out;
}

}  // namespace

MasterEquation::MasterEquation(const SystemSpec& system, const BathModel& lab_bath, const InitialState& state,
                               ReducedPath path)
    : ctx_(system, lab_bath), sigma_z_eig_(ctx_.sd.to_eigenbasis(system.sigma_z)) {
    if (state.n_modes() != lab_bath.size()) {
        throw std::invalid_argument("MasterEquation: state moments and bath have different mode counts");
    }
    for (const auto& t : state.terms) {
        if (t.phi_s.rows() != system.dim()) throw std::invalid_argument("MasterEquation: phi_s dimension mismatch");
        const bool eq = t.moments.only_equilibrium_moments(0.0) && t.adjoint_moments.only_equilibrium_moments(0.0);
        bool use_eq = false;
        switch (path) {
            case ReducedPath::Auto: use_eq = eq; break;
            case ReducedPath::ForceGeneral: use_eq = false; break;
            case ReducedPath::ForceEquilibrium:
                if (!eq) {
                    throw std::invalid_argument("force_equilibrium: term '" + t.label +
                                                "' has non-equilibrium bath moments");
                }
                use_eq = true;
                break;
        }
        terms_.push_back({ctx_.sd.to_eigenbasis(t.phi_s), &t, use_eq, t.moments.V_C.max_abs() > 0.0,
                          t.adjoint_moments.V_C.max_abs() > 0.0});
    }
    kernels_.resize(terms_.size());
}

std::vector<CMatrix> MasterEquation::initial_components() const {
    std::vector<CMatrix> out;
    for (const auto& t : terms_) out.push_back(t.source->moments.T * t.phi_s_eig);
    return out;
}

void MasterEquation::prepare(double t) {
    if (tables_ && tables_->time() == t) return;
    tables_.emplace(ctx_, t);
    for (std::size_t g = 0; g < terms_.size(); ++g) {
        const auto& term = terms_[g];
        const auto& m = term.source->moments;
        const auto& madj = term.source->adjoint_moments;
        auto& k = kernels_[g];
        if (term.equilibrium) {
            k.A = k.A_hat = 0.0;
            k.K_B = tables_->b_kernel_diagonal(m.V_B.diagonal());
            k.K_B_adj = tables_->b_kernel_diagonal(madj.V_B.diagonal());
            continue;
        }
        k.A = kI * (tables_->x().array() * m.V_A.array()).sum();
        k.A_hat = -kI * (tables_->x_conj().array() * m.V_A_hat.array()).sum();
        k.K_B = tables_->b_kernel(m.V_B);
        k.K_B_adj = tables_->b_kernel(madj.V_B);
        if (term.has_c) k.K_C = tables_->c_kernel(m.V_C);
        if (term.has_c_adj) k.K_C_adj = tables_->c_kernel(madj.V_C);
    }
}

CMatrix MasterEquation::rhs(std::size_t g, const CMatrix& rho, double t) {
    prepare(t);
    const auto& term = terms_[g];
    const auto& k = kernels_[g];
    const RVector& eps = ctx_.sd.eigenvalues;
    const CMatrix& L = ctx_.L_eig;
    const CMatrix& Ld = ctx_.Ldag_eig;
    const CMatrix& Ka = tables_->alpha_kernel();

    CMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index a = 0; a < rho.rows(); ++a)
        for (Eigen::Index b = 0; b < rho.cols(); ++b) out(a, b) = Complex(0.0, -(eps(a) - eps(b))) * rho(a, b);

    const Complex T = term.source->moments.T;
    const bool use_rho = std::abs(T) > kTraceFloor;
    CMatrix phi_t;
    if (!term.equilibrium || !use_rho) phi_t = free_propagate(term.phi_s_eig, eps, t);

    if (!term.equilibrium) out += k.A * comm(phi_t, Ld) + k.A_hat * comm(L, phi_t);

    // D(X) = [K_a X, L^dag] + [[K_B, Xh], L^dag] - [L^dag, [Xh, K_C]], Xh = X/T or phi_t
    const CMatrix xh = use_rho ? CMatrix(rho / T) : phi_t;
    CMatrix d = comm(Ka * rho, Ld) + comm(comm(k.K_B, xh), Ld);
    if (term.has_c) d -= comm(Ld, comm(xh, k.K_C));

    const CMatrix rho_dag = rho.adjoint();
    const CMatrix xh_adj = use_rho ? CMatrix(rho_dag / std::conj(T)) : CMatrix(phi_t.adjoint());
    CMatrix d_adj = comm(Ka * rho_dag, Ld) + comm(comm(k.K_B_adj, xh_adj), Ld);
    if (term.has_c_adj) d_adj -= comm(Ld, comm(xh_adj, k.K_C_adj));

    out += d + d_adj.adjoint();
    return out;
}

void MasterEquation::rhs_all(const std::vector<CMatrix>& rho, double t, std::vector<CMatrix>& out) {
    out.resize(rho.size());
    for (std::size_t g = 0; g < rho.size(); ++g) out[g] = rhs(g, rho[g], t);
}

CMatrix rhs_gamma(const CMatrix& rho_g, double t, const SystemSpec& system, const BathModel& bath,
                  const GammaTerm& term) {
    InitialState single;
    single.terms.push_back(term);
    single.adjoint_pairing = {0};
    MasterEquation eq(system, bath, single, ReducedPath::ForceGeneral);
    const auto& sd = eq.context().sd;
    return sd.to_original(eq.rhs(0, sd.to_eigenbasis(rho_g), t));
}

double emission_rate(const CMatrix& rho_rhs, const CMatrix& sigma_z) {
    if (rho_rhs.rows() != sigma_z.rows() || rho_rhs.cols() != sigma_z.cols()) {
        throw std::invalid_argument("emission_rate: dimension mismatch");
    }
    return -(sigma_z * rho_rhs).trace().real();
}

double population(const CMatrix& rho, Eigen::Index level) {
    if (level < 0 || level >= rho.rows()) throw std::out_of_range("population: level index out of range");
    return rho(level, level).real();
}

Trajectory evolve(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                  const EvolutionConfig& cfg) {
    cfg.validate();
    MasterEquation me(system, lab_bath, state, cfg.reduced_path);
    const auto& sd = me.context().sd;
    const CMatrix sz = me.sigma_z_eig();
    const std::size_t n_comp = me.size();

    Trajectory traj;
    const double fastest = std::max(me.context().bath.frequencies.cwiseAbs().maxCoeff(),
                                    system.H.norm());
    if (cfg.dt * fastest > 0.1) {
        std::ostringstream os;
        os << "dt * max(omega_max, |H_S|) = " << cfg.dt * fastest << " exceeds 0.1";
        traj.warnings.push_back(os.str());
    }

    std::vector<CMatrix> rho = me.initial_components();
    std::vector<Complex> trace0;
    for (const auto& r : rho) trace0.push_back(r.trace());

    const std::size_t n_snap = cfg.snapshot_count();
    const std::size_t n_steps = (n_snap - 1) * cfg.record_stride;
    const double h = cfg.dt;

    std::vector<CMatrix> k1, k2, k3, k4, tmp(n_comp);

    auto record = [&](double t, const std::vector<CMatrix>& deriv) {
        CMatrix total = CMatrix::Zero(system.dim(), system.dim());
        CMatrix dtotal = total;
        double drift = 0.0;
        for (std::size_t g = 0; g < n_comp; ++g) {
            total += rho[g];
            dtotal += deriv[g];
            drift = std::max(drift, std::abs(rho[g].trace() - trace0[g]));
        }
        const CMatrix rho_orig = sd.to_original(total);
        traj.times.push_back(t);
        traj.rho.push_back(rho_orig);
        if (cfg.store_components) {
            std::vector<CMatrix> comps;
            for (const auto& r : rho) comps.push_back(sd.to_original(r));
            traj.components.push_back(std::move(comps));
        }
        traj.populations.push_back(rho_orig.diagonal().real());
        traj.sigma_z.push_back((system.sigma_z * rho_orig).trace().real());
        const CMatrix herm = (rho_orig + rho_orig.adjoint()) / 2.0;
        double min_eig = 0.0;
        traj.entropy.push_back(clipped_entropy(herm, &min_eig));
        traj.min_eigenvalue.push_back(min_eig);
        traj.rate.push_back(-(sz * dtotal).trace().real());
        traj.trace_err.push_back(std::abs(rho_orig.trace() - Complex(1.0)));
        traj.hermiticity_err.push_back(hermiticity_error(rho_orig));
        traj.max_component_trace_drift.push_back(drift);
    };

    for (std::size_t n = 0; n <= n_steps; ++n) {
        const double t = static_cast<double>(n) * h;
        me.rhs_all(rho, t, k1);
        if (n % cfg.record_stride == 0) record(t, k1);
        if (n == n_steps) break;

        const double t_half = t + 0.5 * h;
        const double t_next = static_cast<double>(n + 1) * h;
        for (std::size_t g = 0; g < n_comp; ++g) tmp[g] = rho[g] + (0.5 * h) * k1[g];
        me.rhs_all(tmp, t_half, k2);
        for (std::size_t g = 0; g < n_comp; ++g) tmp[g] = rho[g] + (0.5 * h) * k2[g];
        me.rhs_all(tmp, t_half, k3);
        for (std::size_t g = 0; g < n_comp; ++g) tmp[g] = rho[g] + h * k3[g];
        me.rhs_all(tmp, t_next, k4);
        for (std::size_t g = 0; g < n_comp; ++g) {
            rho[g] += (h / 6.0) * (k1[g] + 2.0 * k2[g] + 2.0 * k3[g] + k4[g]);
            if (!rho[g].allFinite()) {
                throw NumericalError("evolve: non-finite density matrix in component '" +
                                         state.terms[g].label + "'",
                                     n + 1);
            }
        }
    }
    return traj;
}

}  // namespace oqs
