#include "oqs/gaussian_moments.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <numbers>

namespace oqs {

namespace {

constexpr int kMaxPower = 4;  // per variable: f degree 2 plus prefactor 1, with headroom
constexpr int kOrder = 40;

enum Var { Z = 0, Zc = 1, Zp = 2, Zpc = 3 };

// Pair covariances of the weight e^{-|z|^2 - |z'|^2 + z'* z}.
double covariance(int u, int v) {
    if (u > v) std::swap(u, v);
    return (u == Z && v == Zc) || (u == Zc && v == Zp) || (u == Zp && v == Zpc) ? 1.0 : 0.0;
}

double matchings(std::vector<int>& vars) {
    if (vars.empty()) return 1.0;
    const int first = vars.back();
    vars.pop_back();
    double total = 0.0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const double c = covariance(first, vars[i]);
        if (c == 0.0) continue;
        const int partner = vars[i];
        vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
        total += c * matchings(vars);
        vars.insert(vars.begin() + static_cast<std::ptrdiff_t>(i), partner);
    }
    vars.push_back(first);
    return total;
}

Complex ipow(Complex z, int k) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

using MonomialTable = std::array<Complex, (kMaxPower + 1) * (kMaxPower + 1) * (kMaxPower + 1) * (kMaxPower + 1)>;

int table_index(int a, int b, int c, int d) {
    return ((a * (kMaxPower + 1) + b) * (kMaxPower + 1) + c) * (kMaxPower + 1) + d;
}

MonomialTable build_quadrature_table() {
    const auto [x, w] = gauss_hermite(kOrder);
    const Eigen::Index n = x.size();
    const Eigen::Index m = n * n;
    CVector nodes(m);
    RVector weights(m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            nodes(i * n + j) = Complex(x(i), x(j));
            weights(i * n + j) = w(i) * w(j) / std::numbers::pi;
        }
    // E(I, J) = exp(conj(z'_J) z_I)
    CMatrix e(m, m);
    for (Eigen::Index jj = 0; jj < m; ++jj)
        for (Eigen::Index ii = 0; ii < m; ++ii) e(ii, jj) = std::exp(std::conj(nodes(jj)) * nodes(ii));

    MonomialTable table{};
    for (int c = 0; c <= kMaxPower; ++c) {
        for (int d = 0; d <= kMaxPower; ++d) {
            CVector q(m);
            for (Eigen::Index jj = 0; jj < m; ++jj)
                q(jj) = weights(jj) * ipow(nodes(jj), c) * ipow(std::conj(nodes(jj)), d);
            const CVector eq = e * q;
            for (int a = 0; a <= kMaxPower; ++a) {
                for (int b = 0; b <= kMaxPower; ++b) {
                    Complex s{0.0, 0.0};
                    for (Eigen::Index ii = 0; ii < m; ++ii)
                        s += weights(ii) * ipow(nodes(ii), a) * ipow(std::conj(nodes(ii)), b) * eq(ii);
                    table[static_cast<std::size_t>(table_index(a, b, c, d))] = s;
                }
            }
        }
    }
    return table;
}

const MonomialTable& quadrature_table() {
    static const MonomialTable table = build_quadrature_table();
    return table;
}

void check_powers(int a, int b, int c, int d) {
    for (int v : {a, b, c, d})
        if (v < 0 || v > kMaxPower) throw std::out_of_range("gaussian moment: monomial power outside [0, 4]");
}

}  // namespace

std::pair<RVector, RVector> gauss_hermite(int order) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) jac(k - 1, k) = jac(k, k - 1) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    RVector w = std::sqrt(std::numbers::pi) * es.eigenvectors().row(0).transpose().array().square();
    return {es.eigenvalues(), w};
}

double wick_monomial(int a, int b, int c, int d) {
    check_powers(a, b, c, d);
    std::vector<int> vars;
    vars.insert(vars.end(), static_cast<std::size_t>(a), Z);
    vars.insert(vars.end(), static_cast<std::size_t>(b), Zc);
    vars.insert(vars.end(), static_cast<std::size_t>(c), Zp);
    vars.insert(vars.end(), static_cast<std::size_t>(d), Zpc);
    if (vars.size() % 2) return 0.0;
    return matchings(vars);
}

Complex quadrature_monomial(int a, int b, int c, int d) {
    check_powers(a, b, c, d);
    return quadrature_table()[static_cast<std::size_t>(table_index(a, b, c, d))];
}

GaussianMomentResult gaussian_moment_both(const FockOperator& phi, MomentKind kind, int q, int p) {
    if (phi.n_modes() > 2) throw std::invalid_argument("gaussian_moment_oracle: at most two modes supported");
    if (phi.max_exc() > 2) throw std::invalid_argument("gaussian_moment_oracle: at most two excitations supported");
    const bool needs_q = kind != MomentKind::T;
    const bool needs_p = kind == MomentKind::B || kind == MomentKind::C;
    if ((needs_q && (q < 0 || q >= phi.n_modes())) || (needs_p && (p < 0 || p >= phi.n_modes()))) {
        throw std::out_of_range("gaussian_moment_oracle: mode index out of range");
    }
    phi.validate();

    GaussianMomentResult r{0.0, 0.0};
    for (const auto& [key, coeff] : phi.entries()) {
        const auto& [ket, bra] = key;
        double wick = 1.0;
        Complex quad = 1.0;
        double norm = 1.0;
        for (int mode = 0; mode < phi.n_modes(); ++mode) {
            int a = 0, d = 0, c = bra[mode];
            const int b = ket[mode];
            if (kind == MomentKind::A_hat) {
                if (mode == q) ++d;
            } else if (needs_q && mode == q) {
                ++a;
            }
            if (kind == MomentKind::B && mode == p) ++d;
            if (kind == MomentKind::C && mode == p) ++c;
            wick *= wick_monomial(a, b, c, d);
            quad *= quadrature_monomial(a, b, c, d);
            norm *= factorial(b) * factorial(bra[mode]);
        }
        r.wick += coeff * wick / std::sqrt(norm);
        r.quadrature += coeff * quad / std::sqrt(norm);
    }
    if (std::abs(r.wick - r.quadrature) > 1e-6) {
        throw NumericalError("gaussian_moment_oracle: Wick and quadrature values disagree");
    }
    return r;
}

Complex gaussian_moment_oracle(const FockOperator& phi, MomentKind kind, int q, int p) {
    return gaussian_moment_both(phi, kind, q, p).wick;
}

Complex bargmann_integral(int p, int n, Complex w, int order) {
    const auto [x, wt] = gauss_hermite(order);
    Complex s{0.0, 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const Complex z(x(i), x(j));
            s += wt(i) * wt(j) * std::exp(std::conj(w) * z) * ipow(std::conj(z), p) * ipow(z, n);
        }
    return s / std::numbers::pi;
}

}  // namespace oqs
