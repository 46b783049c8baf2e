#include "oqs/initial_state.hpp"

#include <map>
#include <sstream>

namespace oqs {

SystemSpec two_level_system(double omega1) {
    SystemSpec s;
    s.type = "two_level";
    s.H = CMatrix::Zero(2, 2);
    s.H(1, 1) = omega1;
    CMatrix sigma = CMatrix::Zero(2, 2);
    sigma(0, 1) = 1.0;  // |g><e|
    s.L = sigma + sigma.adjoint();
    s.sigma_z = CMatrix::Zero(2, 2);
    s.sigma_z(0, 0) = -1.0;
    s.sigma_z(1, 1) = 1.0;
    return s;
}

SystemSpec v_atom_system(double omega1, double omega2, double epsilon_L, double omega_L) {
    SystemSpec s;
    s.type = "v_atom";
    s.omega_frame = omega_L;
    s.H = CMatrix::Zero(3, 3);
    s.H(1, 1) = omega1 - omega_L;
    s.H(2, 2) = omega2 - omega_L;
    s.H(0, 2) = epsilon_L;
    s.H(2, 0) = epsilon_L;
    s.L = CMatrix::Zero(3, 3);
    s.L(0, 1) = 1.0;  // sigma_1 = |g><e1|
    s.L(0, 2) = 1.0;  // sigma_2 = |g><e2|
    s.sigma_z = CMatrix::Identity(3, 3);
    s.sigma_z(0, 0) = -1.0;
    return s;
}

GammaTerm make_term(CMatrix phi_s, FockOperator phi_b, Eigen::Index n_modes, std::string label) {
    GammaTerm t;
    t.moments = moments_from_fock(phi_b, n_modes);
    t.adjoint_moments = moments_from_fock(phi_b.adjoint(), n_modes);
    t.phi_s = std::move(phi_s);
    t.phi_b = std::move(phi_b);
    t.label = std::move(label);
    return t;
}

Complex InitialState::total_trace() const {
    Complex s{0.0, 0.0};
    for (const auto& t : terms) s += t.moments.T * t.phi_s.trace();
    return s;
}

CMatrix InitialState::reduced_state() const {
    if (terms.empty()) return {};
    CMatrix rho = CMatrix::Zero(terms.front().phi_s.rows(), terms.front().phi_s.cols());
    for (const auto& t : terms) rho += initial_rho_component(t);
    return rho;
}

std::vector<std::size_t> find_adjoint_pairing(const std::vector<GammaTerm>& terms, double tol) {
    std::vector<std::size_t> pairing(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const CMatrix target = terms[i].phi_s.adjoint();
        const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
        bool found = false;
        for (std::size_t j = 0; j < terms.size() && !found; ++j) {
            if (terms[j].phi_s.rows() != target.rows()) continue;
            if ((terms[j].phi_s - target).cwiseAbs().maxCoeff() > tol * scale) continue;
            if (!approx_equal(terms[j].phi_b, terms[i].phi_b.adjoint(), tol)) continue;
            pairing[i] = j;
            found = true;
        }
        if (!found) {
            throw std::invalid_argument("inconsistent adjoint pairing: term '" + terms[i].label +
                                        "' has no partner with adjoint system and bath factors");
        }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (pairing[pairing[i]] != i) throw std::invalid_argument("inconsistent adjoint pairing: not an involution");
    }
    return pairing;
}

InitialState make_initial_state(std::vector<GammaTerm> terms, double norm_tol) {
    InitialState st;
    st.terms = std::move(terms);
    st.adjoint_pairing = find_adjoint_pairing(st.terms);
    const Complex tr = st.total_trace();
    if (std::abs(tr - Complex(1.0)) > norm_tol) {
        std::ostringstream os;
        os << "initial state not normalized: sum_g T^g Tr(phi_s^g) = " << tr.real() << (tr.imag() < 0 ? "" : "+")
           << tr.imag() << "i";
        throw std::invalid_argument(os.str());
    }
    return st;
}

CMatrix initial_rho_component(const GammaTerm& term) { return term.moments.T * term.phi_s; }

namespace {

// phi_B restricted to the span of its dyad vectors (exact, since phi_B lives there).
CMatrix compressed_matrix(const FockOperator& phi) {
    std::map<OccupationIndex, Eigen::Index> index;
    for (const auto& d : phi.dyads()) {
        for (const auto& kv : d.ket) index.try_emplace(kv.first, static_cast<Eigen::Index>(index.size()));
        for (const auto& kv : d.bra) index.try_emplace(kv.first, static_cast<Eigen::Index>(index.size()));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(index.size());
    const Eigen::Index k = static_cast<Eigen::Index>(phi.dyads().size());
    auto as_column = [&](const FockVector& v) {
        CVector c = CVector::Zero(n);
        for (const auto& [occ, a] : v) c(index.at(occ)) = a;
        return c;
    };

    if (n <= 2 * k) {
        CMatrix m = CMatrix::Zero(n, n);
        for (const auto& d : phi.dyads()) m += d.weight * as_column(d.ket) * as_column(d.bra).adjoint();
        return m;
    }
    CMatrix span(n, 2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        span.col(2 * i) = as_column(phi.dyads()[static_cast<std::size_t>(i)].ket);
        span.col(2 * i + 1) = as_column(phi.dyads()[static_cast<std::size_t>(i)].bra);
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(span);
    qr.setThreshold(1e-13);
    const Eigen::Index r = qr.rank();
    const CMatrix q = CMatrix(qr.householderQ()).leftCols(r);
    CMatrix m = CMatrix::Zero(r, r);
    for (const auto& d : phi.dyads())
        m += d.weight * (q.adjoint() * as_column(d.ket)) * (q.adjoint() * as_column(d.bra)).adjoint();
    return m;
}

bool is_density_matrix(const FockOperator& phi, double tol) {
    if (std::abs(phi.trace() - Complex(1.0)) > tol) return false;
    const CMatrix m = compressed_matrix(phi);
    if (m.size() == 0) return false;
    if (hermiticity_error(m) > tol) return false;
    return herm_eig(m, 1.0).eigenvalues.minCoeff() >= -tol;
}

}  // namespace

std::pair<bool, std::string> lindblad_condition(const InitialState& state) {
    constexpr double tol = 1e-12;
    bool ok = true;
    std::ostringstream os;
    for (const auto& t : state.terms) {
        const auto& m = t.moments;
        auto flag = [&](const char* what, const char* transition) {
            ok = false;
            os << "  term " << t.label << ": nonzero " << what << " (transition " << transition << ")\n";
        };
        if (m.V_A.size() > 0 && m.V_A.cwiseAbs().maxCoeff() > tol) flag("V_A", "|n_q+1> <-> |n>");
        if (m.V_A_hat.size() > 0 && m.V_A_hat.cwiseAbs().maxCoeff() > tol) flag("V_A_hat", "|n> <-> |n_q+1>");
        if (m.V_B.max_abs_offdiagonal() > tol) flag("off-diagonal V_B", "|n_q+1> <-> |n_q'-1>");
        if (m.V_C.max_abs_offdiagonal() > tol) flag("off-diagonal V_C", "|n_q+1, n_q'+1> <-> |n>");
        if (m.V_C.diagonal().size() > 0 && m.V_C.diagonal().cwiseAbs().maxCoeff() > tol)
            flag("diagonal V_C", "|n_q+2> <-> |n>");
    }
    return {ok, ok ? std::string("  all bath moments beyond diag(V_B) vanish\n") : os.str()};
}

Classification classify(const InitialState& state) {
    find_adjoint_pairing(state.terms);

    constexpr double tol = 1e-9;
    Classification c;
    c.is_SL = !state.terms.empty();
    c.all_bath_equilibrium = true;
    int max_exc = 0;
    for (const auto& t : state.terms) {
        max_exc = std::max(max_exc, t.phi_b.max_exc());
        if (c.is_SL && !is_density_matrix(t.phi_b, tol)) c.is_SL = false;
        if (std::abs(t.moments.T) <= tol && std::abs(t.phi_s.trace()) <= tol) c.is_NSL = true;
        if (!t.phi_b.is_fock_diagonal(1e-14)) c.all_bath_equilibrium = false;
    }
    if (c.is_SL) c.is_NSL = false;

    auto [lind, lind_report] = lindblad_condition(state);
    c.lindblad_in_markov_secular = lind;

    std::ostringstream os;
    os << "terms: " << state.terms.size() << " (bath Fock space truncated at " << max_exc << " excitations)\n";
    for (const auto& t : state.terms) {
        os << "  " << t.label << ": T = " << t.moments.T.real();
        if (t.moments.T.imag() != 0.0) os << (t.moments.T.imag() < 0 ? "" : "+") << t.moments.T.imag() << "i";
        os << ", Tr phi_s = " << t.phi_s.trace().real() << '\n';
    }
    os << "SL: " << (c.is_SL ? "yes" : "no") << " (every bath factor a density matrix in the truncated space)\n";
    os << "NSL: " << (c.is_NSL ? "yes" : "no") << '\n';
    os << "equilibrium: " << (c.all_bath_equilibrium ? "yes" : "no") << '\n';
    os << "lindblad: " << (lind ? "yes" : "no") << '\n' << lind_report;
    c.report = os.str();
    return c;
}

std::vector<GammaTerm> expand_pure_state(const std::vector<PureComponent>& parts, double weight,
                                         Eigen::Index n_modes, int max_exc, const std::string& prefix) {
    std::vector<GammaTerm> terms;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = 0; j < parts.size(); ++j) {
            FockOperator phi(static_cast<int>(n_modes), max_exc);
            phi.add_dyad(1.0, parts[i].bath, parts[j].bath);
            CMatrix phi_s = weight * parts[i].system * parts[j].system.adjoint();
            terms.push_back(make_term(std::move(phi_s), std::move(phi), n_modes,
                                      prefix + parts[i].tag + parts[j].tag));
        }
    }
    return terms;
}

}  // namespace oqs
