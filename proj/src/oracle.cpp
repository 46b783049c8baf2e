#include "oqs/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <functional>
#include <sstream>

namespace oqs {

Eigen::Index TotalBasis::index(const OccupationIndex& occ, Eigen::Index s) const {
    auto it = bath_lookup.find(occ);
    return it == bath_lookup.end() ? -1 : index(it->second, s);
}

TotalBasis enumerate_basis(int n_modes, int max_exc, Eigen::Index d, std::size_t cap) {
    if (n_modes < 0 || max_exc < 0 || d < 1) throw std::invalid_argument("enumerate_basis: invalid sizes");
    // count first so oversize requests fail before allocating
    double count = 0.0, term = 1.0;
    for (int m = 0; m <= max_exc; ++m) {
        if (m > 0) term = term * (n_modes + m - 1) / m;
        count += term;
    }
    if (count * static_cast<double>(d) > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "enumerate_basis: " << count * static_cast<double>(d) << " states exceed the cap of " << cap;
        throw OracleLimitError(os.str());
    }

    TotalBasis b;
    b.d = d;
    b.n_modes = n_modes;
    b.max_exc = max_exc;
    std::vector<int> modes;
    std::function<void(int, int)> fill = [&](int remaining, int start) {
        if (remaining == 0) {
            std::vector<OccupationIndex::Entry> e;
            for (int q : modes) e.emplace_back(q, 1);
            b.bath_states.emplace_back(std::move(e));
            return;
        }
        for (int q = start; q < n_modes; ++q) {
            modes.push_back(q);
            fill(remaining - 1, q);
            modes.pop_back();
        }
    };
    for (int m = 0; m <= max_exc; ++m) fill(m, 0);
    for (std::size_t i = 0; i < b.bath_states.size(); ++i)
        b.bath_lookup.emplace(b.bath_states[i], static_cast<Eigen::Index>(i));
    return b;
}

SparseCMatrix build_total_hamiltonian_sparse(const SystemSpec& system, const BathModel& bath,
                                             const TotalBasis& basis) {
    if (bath.size() != basis.n_modes) throw std::invalid_argument("build_total_hamiltonian: mode count mismatch");
    if (system.dim() != basis.d) throw std::invalid_argument("build_total_hamiltonian: system dimension mismatch");
    const Eigen::Index d = basis.d;
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t bi = 0; bi < basis.bath_states.size(); ++bi) {
        const auto& occ = basis.bath_states[bi];
        const Eigen::Index b = static_cast<Eigen::Index>(bi);
        double e_bath = 0.0;
        for (const auto& [q, n] : occ.entries()) e_bath += n * bath.frequencies(q);
        for (Eigen::Index s = 0; s < d; ++s) {
            for (Eigen::Index s2 = 0; s2 < d; ++s2) {
                Complex h = system.H(s, s2);
                if (s == s2) h += e_bath;
                if (h != Complex(0.0)) trip.emplace_back(basis.index(b, s), basis.index(b, s2), h);
            }
        }
        if (occ.total() >= basis.max_exc) continue;
        for (int q = 0; q < basis.n_modes; ++q) {
            const Eigen::Index up = basis.bath_lookup.at(*occ.shifted(q, +1));
            const double amp = bath.couplings(q) * std::sqrt(static_cast<double>(occ[q] + 1));
            if (amp == 0.0) continue;
            for (Eigen::Index s = 0; s < d; ++s) {
                for (Eigen::Index s2 = 0; s2 < d; ++s2) {
                    const Complex l = system.L(s, s2);
                    if (l == Complex(0.0)) continue;
                    // <up,s| B^dag L |b,s2> and its conjugate <b,s2| B L^dag |up,s>
                    trip.emplace_back(basis.index(up, s), basis.index(b, s2), amp * l);
                    trip.emplace_back(basis.index(b, s2), basis.index(up, s), amp * std::conj(l));
                }
            }
        }
    }
    SparseCMatrix h(basis.size(), basis.size());
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

CMatrix build_total_hamiltonian(const SystemSpec& system, const BathModel& bath, const TotalBasis& basis) {
    return CMatrix(build_total_hamiltonian_sparse(system, bath, basis));
}

CMatrix total_initial_state(const InitialState& state, const TotalBasis& basis) {
    const Eigen::Index n = basis.size();
    CMatrix rho = CMatrix::Zero(n, n);
    for (const auto& t : state.terms) {
        for (const auto& [key, c] : t.phi_b.entries()) {
            const Eigen::Index kb = basis.index(key.first, 0);
            const Eigen::Index bb = basis.index(key.second, 0);
            if (kb < 0 || bb < 0) {
                throw OracleLimitError("total_initial_state: initial bath occupation outside the truncated basis");
            }
            rho.block(kb, bb, basis.d, basis.d) += c * t.phi_s;
        }
    }
    return rho;
}

namespace {

struct Preparation {
    TotalBasis basis;
    BathModel bath;
    std::vector<double> weights;
    std::vector<CVector> vectors;
};

// rho_tot(0) = sum_k w_k |v_k><v_k| from its restriction to the occupied rows.
Preparation prepare(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath, int max_exc,
                    const ExactOptions& opt) {
    Preparation p{enumerate_basis(static_cast<int>(lab_bath.size()), max_exc, system.dim(), opt.basis_cap),
                  system.omega_frame == 0.0 ? lab_bath : lab_bath.in_rotating_frame(system.omega_frame),
                  {},
                  {}};
    std::map<Eigen::Index, Eigen::Index> local;
    for (const auto& t : state.terms)
        for (const auto& [key, c] : t.phi_b.entries())
            for (const auto* occ : {&key.first, &key.second}) {
                const Eigen::Index b = p.basis.index(*occ, 0);
                if (b < 0) throw OracleLimitError("exact_evolve: initial bath occupation outside the truncated basis");
                for (Eigen::Index s = 0; s < p.basis.d; ++s) local.try_emplace(b + s, 0);
            }
    Eigen::Index k = 0;
    std::vector<Eigen::Index> global(local.size());
    for (auto& [g, l] : local) {
        l = k;
        global[static_cast<std::size_t>(k++)] = g;
    }
    CMatrix small = CMatrix::Zero(k, k);
    for (const auto& t : state.terms) {
        for (const auto& [key, c] : t.phi_b.entries()) {
            const Eigen::Index kb = p.basis.index(key.first, 0), bb = p.basis.index(key.second, 0);
            for (Eigen::Index s = 0; s < p.basis.d; ++s)
                for (Eigen::Index s2 = 0; s2 < p.basis.d; ++s2)
                    small(local.at(kb + s), local.at(bb + s2)) += c * t.phi_s(s, s2);
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es((small + small.adjoint()) / 2.0);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double w = es.eigenvalues()(i);
        if (std::abs(w) < 1e-13) continue;
        CVector v = CVector::Zero(p.basis.size());
        for (Eigen::Index j = 0; j < k; ++j) v(global[static_cast<std::size_t>(j)]) = es.eigenvectors()(j, i);
        p.weights.push_back(w);
        p.vectors.push_back(std::move(v));
    }
    return p;
}

void accumulate_reduced(CMatrix& rho_s, const CVector& psi, double w, Eigen::Index d) {
    Eigen::Map<const CMatrix> m(psi.data(), d, psi.size() / d);
    rho_s += w * (m * m.adjoint());
}

// exp(-i H tau) v by Lanczos; splits the step while the residual estimate is too large.
CVector krylov_step(const SparseCMatrix& h, const CVector& v, double tau, double tol, int depth = 0) {
    constexpr int kMaxDim = 40;
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    std::vector<CVector> q{v / beta0};
    std::vector<double> alpha, beta;
    CVector w;
    double last_beta = 0.0;
    for (int j = 0; j < kMaxDim; ++j) {
        w = h * q[static_cast<std::size_t>(j)];
        const double a = q[static_cast<std::size_t>(j)].dot(w).real();
        w -= a * q[static_cast<std::size_t>(j)];
        if (j > 0) w -= beta.back() * q[static_cast<std::size_t>(j - 1)];
        // one reorthogonalization pass keeps the basis usable at this size
        for (const auto& qi : q) w -= qi.dot(w) * qi;
        alpha.push_back(a);
        last_beta = w.norm();
        if (last_beta < 1e-14 || j == kMaxDim - 1) break;
        beta.push_back(last_beta);
        q.push_back(w / last_beta);
    }
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    CVector phase(m);
    for (Eigen::Index i = 0; i < m; ++i) phase(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * tau));
    const CVector coeff = es.eigenvectors().cast<Complex>() * phase.asDiagonal() *
                          es.eigenvectors().row(0).transpose().cast<Complex>();
    const double residual = last_beta * std::abs(coeff(m - 1));
    if (residual > tol && last_beta >= 1e-14) {
        if (depth > 30) throw NumericalError("exact_evolve: Krylov propagation failed to converge");
        const CVector half = krylov_step(h, v, tau / 2, tol / 2, depth + 1);
        return krylov_step(h, half, tau / 2, tol / 2, depth + 1);
    }
    CVector out = CVector::Zero(v.size());
    for (Eigen::Index i = 0; i < m; ++i) out += coeff(i) * q[static_cast<std::size_t>(i)];
    return beta0 * out;
}

void check_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
            throw std::invalid_argument("exact_evolve: times must be ascending and non-negative");
        }
    }
}

}  // namespace

std::vector<CMatrix> exact_evolve(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                                  int max_exc, const std::vector<double>& times, const ExactOptions& opt) {
    check_times(times);
    const Preparation p = prepare(state, system, lab_bath, max_exc, opt);
    const Eigen::Index d = system.dim();
    const SparseCMatrix h = build_total_hamiltonian_sparse(system, p.bath, p.basis);
    std::vector<CMatrix> out(times.size(), CMatrix::Zero(d, d));

    if (p.basis.size() <= opt.dense_cap) {
        const CMatrix hd(h);
        const bool real = hd.imag().cwiseAbs().maxCoeff() == 0.0;
        CMatrix u;
        RVector e;
        if (real) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hd.real());
            u = es.eigenvectors().cast<Complex>();
            e = es.eigenvalues();
        } else {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(hd);
            u = es.eigenvectors();
            e = es.eigenvalues();
        }
        for (std::size_t k = 0; k < p.vectors.size(); ++k) {
            const CVector c = u.adjoint() * p.vectors[k];
            for (std::size_t i = 0; i < times.size(); ++i) {
                CVector ct = c;
                for (Eigen::Index j = 0; j < ct.size(); ++j) ct(j) *= std::exp(Complex(0.0, -e(j) * times[i]));
                accumulate_reduced(out[i], u * ct, p.weights[k], d);
            }
        }
        return out;
    }

    for (std::size_t k = 0; k < p.vectors.size(); ++k) {
        CVector psi = p.vectors[k];
        double t_now = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] > t_now) psi = krylov_step(h, psi, times[i] - t_now, opt.krylov_tol);
            t_now = times[i];
            accumulate_reduced(out[i], psi, p.weights[k], d);
        }
    }
    return out;
}

CMatrix exact_total_state(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                          int max_exc, double t) {
    const ExactOptions opt;
    const Preparation p = prepare(state, system, lab_bath, max_exc, opt);
    if (p.basis.size() > opt.dense_cap) throw OracleLimitError("exact_total_state: basis too large for dense path");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(build_total_hamiltonian(system, p.bath, p.basis));
    CVector phase(es.eigenvalues().size());
    for (Eigen::Index j = 0; j < phase.size(); ++j) phase(j) = std::exp(Complex(0.0, -es.eigenvalues()(j) * t));
    const CMatrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    CMatrix rho = CMatrix::Zero(p.basis.size(), p.basis.size());
    for (std::size_t k = 0; k < p.vectors.size(); ++k) {
        const CVector psi = u * p.vectors[k];
        rho += p.weights[k] * psi * psi.adjoint();
    }
    return rho;
}

LeakageReport check_truncation(const InitialState& state, const SystemSpec& system, const BathModel& lab_bath,
                               int max_exc, const std::vector<double>& times, const std::vector<CMatrix>& reference,
                               double threshold, const ExactOptions& opt) {
    const auto finer = exact_evolve(state, system, lab_bath, max_exc + 1, times, opt);
    LeakageReport r;
    for (std::size_t i = 0; i < times.size(); ++i)
        r.max_change = std::max(r.max_change, (finer[i] - reference[i]).cwiseAbs().maxCoeff());
    r.converged = r.max_change <= threshold;
    return r;
}

Comparison compare(const Trajectory& me, const std::vector<CMatrix>& exact) {
    if (me.rho.size() != exact.size()) throw std::invalid_argument("compare: time grids differ in length");
    Comparison c;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const CMatrix a = (me.rho[i] + me.rho[i].adjoint()) / 2.0;
        const CMatrix b = (exact[i] + exact[i].adjoint()) / 2.0;
        const double dist = trace_distance(a, b);
        c.distance.push_back(dist);
        c.max_distance = std::max(c.max_distance, dist);
    }
    return c;
}

}  // namespace oqs
