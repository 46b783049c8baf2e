#include "doctest.h"

#include "oqs/presets.hpp"

using namespace oqs;

namespace {

BathModel grid() { return discretize(SpectralDensity{}, 100.0, 300); }

Scenario preset(const std::string& name) {
    const auto b = grid();
    if (name == "ex1_nsl") return build_example1(PresetKind::NSL, {}, b);
    if (name == "ex1_sl") return build_example1(PresetKind::SL, {}, b);
    if (name == "ex2_nsl") return build_example2(PresetKind::NSL, {}, b);
    if (name == "ex2_sl") return build_example2(PresetKind::SL, {}, b);
    if (name == "ex2_dc") return build_example2(PresetKind::DC, {}, b);
    if (name == "ex3_nsl") return build_example3(PresetKind::NSL, {}, b);
    return build_example3(PresetKind::SL, {}, b);
}

}  // namespace

TEST_CASE("system builders") {
    const auto tl = two_level_system(1.3);
    CHECK(tl.dim() == 2);
    CHECK(tl.H(1, 1) == Complex(1.3));
    CHECK(tl.L(0, 1) == Complex(1.0));
    CHECK(tl.L(1, 0) == Complex(1.0));
    CHECK(tl.sigma_z(0, 0) == Complex(-1.0));
    const auto v = v_atom_system(1.0, 0.5, 0.02, 0.1);
    CHECK(v.dim() == 3);
    CHECK(v.H(1, 1).real() == doctest::Approx(0.9));
    CHECK(v.H(2, 2).real() == doctest::Approx(0.4));
    CHECK(v.H(0, 2) == Complex(0.02));
    CHECK(hermiticity_error(v.H) == 0.0);
    CHECK(v.L(0, 1) == Complex(1.0));
    CHECK(v.L(0, 2) == Complex(1.0));
}

TEST_CASE("every preset is normalized with Hermitian reduced state") {
    for (const char* name : {"ex1_nsl", "ex1_sl", "ex2_nsl", "ex2_sl", "ex2_dc", "ex3_nsl", "ex3_sl"}) {
        CAPTURE(name);
        const auto sc = preset(name);
        CHECK(std::abs(sc.state.total_trace() - 1.0) < 1e-10);
        const CMatrix rho = sc.state.reduced_state();
        CHECK(hermiticity_error(rho) < 1e-12);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
        CHECK(herm_eig(rho).eigenvalues(0) > -1e-12);
    }
}

TEST_CASE("entangled V-atom state has the mixed reduced state") {
    const auto sc = preset("ex1_nsl");
    REQUIRE(sc.state.terms.size() == 4);
    const auto eig = herm_eig(sc.state.reduced_state()).eigenvalues;
    CHECK(eig(2) == doctest::Approx(0.75));
    CHECK(eig(1) == doctest::Approx(0.25));
    CHECK(von_neumann_entropy(sc.state.reduced_state()) == doctest::Approx(0.562335).epsilon(1e-6));
    CHECK(von_neumann_entropy(preset("ex1_sl").state.reduced_state()) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("adjoint pairing of the entangled decomposition") {
    const auto sc = preset("ex1_nsl");
    const auto& pair = sc.state.adjoint_pairing;
    REQUIRE(pair.size() == 4);
    CHECK(pair[0] == 0);
    CHECK(pair[1] == 1);
    CHECK(pair[2] == 3);
    CHECK(pair[3] == 2);
    for (std::size_t g = 0; g < 4; ++g) CHECK(pair[pair[g]] == g);
}

TEST_CASE("coherence terms are traceless on both sides") {
    const auto sc = preset("ex3_nsl");
    int traceless = 0;
    for (const auto& t : sc.state.terms) {
        if (std::abs(t.moments.T) < 1e-12) {
            ++traceless;
            CHECK(std::abs(t.phi_s.trace()) < 1e-12);
        }
    }
    CHECK(traceless == 2);
}

TEST_CASE("classification table") {
    struct Row {
        const char* name;
        bool sl, nsl, eq, lindblad;
    };
    const Row rows[] = {{"ex1_nsl", false, true, false, false}, {"ex1_sl", true, false, false, false},
                        {"ex2_nsl", false, true, false, false}, {"ex2_sl", true, false, false, false},
                        {"ex2_dc", true, false, true, true},    {"ex3_nsl", false, true, false, false},
                        {"ex3_sl", true, false, false, false}};
    for (const auto& r : rows) {
        CAPTURE(r.name);
        const auto c = classify(preset(r.name).state);
        CHECK(c.is_SL == r.sl);
        CHECK(c.is_NSL == r.nsl);
        CHECK(c.all_bath_equilibrium == r.eq);
        CHECK(c.lindblad_in_markov_secular == r.lindblad);
        CHECK(lindblad_condition(preset(r.name).state).first == r.lindblad);
        CHECK(c.report.find("truncated at 2") != std::string::npos);
    }
}

TEST_CASE("Fock-diagonal mixtures are equilibrium and Lindblad-recoverable") {
    const Eigen::Index n = 5;
    FockOperator phi(static_cast<int>(n), 2);
    phi.add_entry(OccupationIndex(), OccupationIndex(), 0.6);
    phi.add_entry(OccupationIndex::single(2), OccupationIndex::single(2), 0.3);
    phi.add_entry(OccupationIndex::single(4, 2), OccupationIndex::single(4, 2), 0.1);
    CMatrix rho_s = CMatrix::Zero(2, 2);
    rho_s(0, 0) = 0.4;
    rho_s(1, 1) = 0.6;
    rho_s(0, 1) = rho_s(1, 0) = 0.2;
    const auto state = make_initial_state({make_term(rho_s, phi, n, "th")});
    const auto c = classify(state);
    CHECK(c.all_bath_equilibrium);
    CHECK(c.is_SL);
    CHECK(lindblad_condition(state).first);
    CHECK(state.terms[0].moments.only_equilibrium_moments());
}

TEST_CASE("Lindblad condition reports the violating moment classes") {
    const auto [ok, report] = lindblad_condition(preset("ex3_sl").state);
    CHECK_FALSE(ok);
    CHECK(report.find("V_A") != std::string::npos);
    CHECK(report.find("off-diagonal V_B") != std::string::npos);
}

TEST_CASE("normalization and pairing errors") {
    const Eigen::Index n = 3;
    FockOperator vac(3, 2);
    vac.add_entry(OccupationIndex(), OccupationIndex(), 1.0);
    CHECK_THROWS_AS(make_initial_state({make_term(0.5 * CMatrix::Identity(2, 2) * 1.5, vac, n, "x")}),
                    std::invalid_argument);
    FockOperator coh(3, 2);
    coh.add_entry(OccupationIndex::single(0), OccupationIndex(), 1.0);
    CMatrix s = CMatrix::Zero(2, 2);
    s(1, 0) = 0.5;
    std::vector<GammaTerm> terms{make_term(0.5 * CMatrix::Identity(2, 2), vac, n, "a"), make_term(s, coh, n, "b")};
    CHECK_THROWS_WITH_AS(find_adjoint_pairing(terms), doctest::Contains("inconsistent adjoint pairing"),
                         std::invalid_argument);
}

TEST_CASE("pure-state expansion reproduces the product state") {
    const Eigen::Index n = 4;
    CVector s(2);
    s << std::sqrt(0.3), std::sqrt(0.7);
    FockVector b{{OccupationIndex(), std::sqrt(0.5)}, {OccupationIndex::single(1), std::sqrt(0.5)}};
    const auto terms = expand_pure_state({{s, b, "p"}}, 1.0, n, 2, "");
    REQUIRE(terms.size() == 1);
    CHECK((terms[0].phi_s - s * s.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(terms[0].moments.T - 1.0) < 1e-15);
    CHECK(std::abs(terms[0].moments.V_A(1) - 0.5) < 1e-15);
}

TEST_CASE("initial component equals T phi_s") {
    for (const auto& t : preset("ex2_nsl").state.terms)
        CHECK((initial_rho_component(t) - t.moments.T * t.phi_s).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("packet amplitudes follow the packet centre") {
    Example3Params p;
    p.k0 = 3.0;
    const auto sc = build_example3(PresetKind::SL, p, grid());
    const auto& va = sc.state.terms[0].moments.V_A;
    Eigen::Index i = 0;
    va.cwiseAbs().maxCoeff(&i);
    CHECK(std::abs(grid().frequencies(i) - 3.0) < 0.34);
}
