// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// "Initial window" is pinned as follows. Entropy and population trends compare
// every recorded sample with t in (0, 0.5] against t = 0. The rate sign is
// checked on (0, 0.1]. The DC "initial rise" is [0, 1].

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "oqs/cli.hpp"
#include "oqs/csv.hpp"
#include "oqs/gaussian_moments.hpp"
#include "oqs/lindblad.hpp"
#include "oqs/presets.hpp"

using namespace oqs;

namespace {

constexpr double kTrendWindow = 0.5;
constexpr double kRateWindow = 0.1;
constexpr double kRiseWindow = 1.0;

const char* const kPresets[] = {"ex1_nsl", "ex1_sl", "ex2_nsl", "ex2_sl", "ex2_dc", "ex3_nsl", "ex3_sl"};

ScenarioConfig preset(const std::string& name) {
    return load_config(std::string(OQS_PRESET_DIR) + "/" + name + ".json");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// true if pred(k) holds for every recorded index with t in (0, window]
bool on_window(const Trajectory& tr, double window, const std::function<bool(std::size_t)>& pred) {
    bool any = false;
    for (std::size_t k = 1; k < tr.times.size() && tr.times[k] <= window + 1e-12; ++k) {
        any = true;
        if (!pred(k)) return false;
    }
    return any;
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", title.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
}

Outcome oracle_criterion(const std::string& name, double max_distance) {
    auto cfg = preset(name);
    cfg.bath.alpha = 0.005;
    cfg.evolve.dt = 1e-3;
    cfg.evolve.t_max = 10.0;
    OracleOptions opt;
    opt.modes = 30;
    opt.omega_max = 10.0;
    opt.max_exc = 2;
    opt.scaling = true;
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = cmd_oracle(cfg, opt);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "max trace distance " << run.comparison.max_distance << " (limit " << max_distance << "), alpha/2 "
      << run.half_alpha_distance << ", factor " << run.scaling_factor << " (>= 2.5), " << secs
      << " s (< 60), max_exc+1 change " << run.leakage.max_change << (run.leakage.converged ? "" : " [flagged]");
    return {run.comparison.max_distance <= max_distance && run.scaling_factor >= 2.5 && secs < 60.0, d.str()};
}

}  // namespace

int main() {
    report(1, "oracle equivalence, Example 2 DC", [] { return oracle_criterion("ex2_dc", 0.02); });
    report(2, "oracle equivalence, Example 3 NSL", [] { return oracle_criterion("ex3_nsl", 0.03); });

    report(3, "conservation on every preset", [] {
        double worst_trace = 0.0, worst_herm = 0.0;
        for (const char* name : kPresets) {
            const auto tr = run_scenario(preset(name));
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                worst_trace = std::max(worst_trace, tr.trace_err[k]);
                worst_herm = std::max(worst_herm, tr.hermiticity_err[k]);
            }
        }
        std::ostringstream d;
        d << "max |Tr - 1| " << worst_trace << ", max hermiticity error " << worst_herm << " (< 1e-8)";
        return Outcome{worst_trace < 1e-8 && worst_herm < 1e-8, d.str()};
    });

    report(4, "moment coefficients against the Gaussian-integral oracle", [] {
        using E = OccupationIndex::Entry;
        const std::vector<OccupationIndex> states{OccupationIndex(),          OccupationIndex({E{0, 1}}),
                                                  OccupationIndex({E{1, 1}}), OccupationIndex({E{0, 2}}),
                                                  OccupationIndex({E{0, 1}, E{1, 1}}), OccupationIndex({E{1, 2}})};
        double worst = 0.0;
        int checks = 0;
        for (const auto& ket : states) {
            for (const auto& bra : states) {
                FockOperator phi(2, 2);
                phi.add_entry(ket, bra, Complex(0.7, -0.4));
                const auto m = moments_from_fock(phi, 2);
                for (int q = 0; q < 2; ++q) {
                    for (int p = 0; p < 2; ++p) {
                        const Complex lib[] = {m.T, m.V_A(q), m.V_A_hat(q), m.V_B(q, p), m.V_C(q, p)};
                        const MomentKind kinds[] = {MomentKind::T, MomentKind::A, MomentKind::A_hat, MomentKind::B,
                                                    MomentKind::C};
                        for (int k = 0; k < 5; ++k) {
                            worst = std::max(worst, std::abs(lib[k] - gaussian_moment_oracle(phi, kinds[k], q, p)));
                            ++checks;
                        }
                    }
                }
            }
        }
        // one-photon packet dyad |1_G><1_G| on two modes
        const CVector g = (CVector(2) << 0.6, Complex(0.0, 0.8)).finished();
        FockOperator packet(2, 2);
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                packet.add_entry(OccupationIndex::single(k), OccupationIndex::single(l), g(k) * std::conj(g(l)));
        double dev1 = 0.0, dev2 = 0.0;
        for (int q = 0; q < 2; ++q) {
            for (int p = 0; p < 2; ++p) {
                const Complex oracle = gaussian_moment_oracle(packet, MomentKind::B, q, p);
                dev1 = std::max(dev1, std::abs(oracle - g(q) * std::conj(g(p))));
                dev2 = std::max(dev2, std::abs(oracle - 2.0 * g(q) * std::conj(g(p))));
            }
        }
        const bool no_factor_two = dev1 < 1e-10 && dev2 > 0.1;
        std::ostringstream d;
        d << checks << " lattice moments, max deviation " << worst << " (< 1e-6); packet V_B verdict: "
          << (no_factor_two ? "G_q G_p* without factor 2" : "inconclusive") << " (deviation " << dev1 << ")";
        return Outcome{worst < 1e-6 && no_factor_two, d.str()};
    });

    report(5, "entropy trends over the 21-value epsilon_L sweep", [] {
        const auto t0 = std::chrono::steady_clock::now();
        int sl_ok = 0, nsl_ok = 0, nsl_start_ok = 0;
        double nsl_start = 0.0, worst_sl_start = 0.0;
        const auto values = sweep_values(0.0, 0.02, 0.001);
        for (double eps : values) {
            for (const char* name : {"ex1_sl", "ex1_nsl"}) {
                auto cfg = preset(name);
                set_parameter(cfg, "epsilon_L", eps);
                const auto tr = run_scenario(cfg);
                const double s0 = tr.entropy.front();
                if (std::string(name) == "ex1_sl") {
                    worst_sl_start = std::max(worst_sl_start, std::abs(s0));
                    if (std::abs(s0) < 1e-9 &&
                        on_window(tr, kTrendWindow, [&](std::size_t k) { return tr.entropy[k] > s0; }))
                        ++sl_ok;
                } else {
                    nsl_start = s0;
                    if (std::abs(s0 - 0.562335) <= 1e-4) ++nsl_start_ok;
                    if (on_window(tr, kTrendWindow, [&](std::size_t k) { return tr.entropy[k] < s0; })) ++nsl_ok;
                }
            }
        }
        const double secs = seconds_since(t0);
        const int n = static_cast<int>(values.size());
        std::ostringstream d;
        d << "SL start 0 and rising: " << sl_ok << "/" << n << " (max |S(0)| " << worst_sl_start
          << "); NSL start " << nsl_start << " within 1e-4: " << nsl_start_ok << "/" << n
          << "; NSL decaying: " << nsl_ok << "/" << n << "; " << secs << " s (< 600)";
        return Outcome{sl_ok == n && nsl_ok == n && nsl_start_ok == n && secs < 600.0, d.str()};
    });

    report(6, "emission rate and population trends", [] {
        const auto omegas = sweep_values(0.1, 3.1, 0.2);
        const int n = static_cast<int>(omegas.size());
        int nsl_ok = 0, sl_ok = 0, dc_ok = 0;
        std::string nsl_fail;
        for (double w : omegas) {
            for (const char* name : {"ex2_nsl", "ex2_sl", "ex2_dc"}) {
                auto cfg = preset(name);
                set_parameter(cfg, "omega1", w);
                cfg.evolve.t_max = 2.0;
                const auto tr = run_scenario(cfg);
                const std::string kind(name);
                if (kind == "ex2_dc") {
                    if (std::abs(tr.rate.front()) < 1e-12 &&
                        on_window(tr, kRiseWindow, [&](std::size_t k) { return tr.rate[k] >= -1e-9; }))
                        ++dc_ok;
                    continue;
                }
                const bool neg = on_window(tr, kRateWindow, [&](std::size_t k) { return tr.rate[k] < 0.0; });
                if (kind == "ex2_sl") {
                    sl_ok += neg;
                } else {
                    nsl_ok += neg;
                    if (!neg) nsl_fail += " " + format_number(w);
                }
            }
        }
        const auto ex3_omegas = sweep_values(0.05, 0.85, 0.1);
        const int n3 = static_cast<int>(ex3_omegas.size());
        int ex3_nsl_ok = 0, ex3_sl_ok = 0;
        for (double w : ex3_omegas) {
            for (const char* name : {"ex3_nsl", "ex3_sl"}) {
                auto cfg = preset(name);
                set_parameter(cfg, "omega1", w);
                cfg.evolve.t_max = 1.0;
                const auto tr = run_scenario(cfg);
                const double p0 = tr.populations.front()(1);
                const bool up = on_window(tr, kTrendWindow, [&](std::size_t k) { return tr.populations[k](1) > p0; });
                (std::string(name) == "ex3_nsl" ? ex3_nsl_ok : ex3_sl_ok) += up;
            }
        }
        std::ostringstream d;
        d << "Ex2 R < 0 initially: NSL " << nsl_ok << "/" << n
          << (nsl_fail.empty() ? "" : " (not at omega1 =" + nsl_fail + ")") << ", SL " << sl_ok << "/" << n
          << "; DC R(0) = 0 and R >= -1e-9: " << dc_ok << "/" << n << "; Ex3 excited population rising: NSL "
          << ex3_nsl_ok << "/" << n3 << ", SL " << ex3_sl_ok << "/" << n3;
        return Outcome{nsl_ok == n && sl_ok == n && dc_ok == n && ex3_nsl_ok == n3 && ex3_sl_ok == n3, d.str()};
    });

    report(7, "equilibrium-reduction identity", [] {
        const auto cfg = preset("ex2_dc");
        const auto built = build_scenario(cfg);
        // a second Fock-diagonal state: occupied modes mixed with coherent system parts
        const Eigen::Index n = built.bath.size();
        FockOperator a(static_cast<int>(n), 2), b(static_cast<int>(n), 2);
        a.add_entry(OccupationIndex(), OccupationIndex(), 0.5);
        a.add_entry(OccupationIndex::single(29), OccupationIndex::single(29), 0.2);
        b.add_entry(OccupationIndex::single(10, 2), OccupationIndex::single(10, 2), 0.2);
        b.add_entry(OccupationIndex({{5, 1}, {40, 1}}), OccupationIndex({{5, 1}, {40, 1}}), 0.1);
        CMatrix s1(2, 2), s2(2, 2);
        s1 << 0.3, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.7;
        s2 << 0.6, 0.3, 0.3, 0.4;
        const auto mixed = make_initial_state({make_term(s1, a, n, "a"), make_term(s2, b, n, "b")});

        double worst = 0.0;
        bool lindblad = true;
        for (const InitialState* st : {&built.state, &mixed}) {
            lindblad = lindblad && lindblad_condition(*st).first;
            auto evo = evolution_config(cfg);
            evo.record_stride = 1;
            evo.t_max = 5.0;
            evo.reduced_path = ReducedPath::ForceGeneral;
            const auto gen = evolve(*st, built.system, built.bath, evo);
            evo.reduced_path = ReducedPath::ForceEquilibrium;
            const auto eq = evolve(*st, built.system, built.bath, evo);
            for (std::size_t k = 0; k < gen.rho.size(); ++k)
                worst = std::max(worst, (gen.rho[k] - eq.rho[k]).cwiseAbs().maxCoeff());
        }
        std::ostringstream d;
        d << "max per-step difference " << worst << " (< 1e-12), lindblad_condition " << (lindblad ? "true" : "false");
        return Outcome{worst < 1e-12 && lindblad, d.str()};
    });

    report(8, "classification table", [] {
        struct Row {
            const char* name;
            bool sl, nsl, eq, lindblad;
        };
        const Row rows[] = {{"ex1_nsl", false, true, false, false}, {"ex1_sl", true, false, false, false},
                            {"ex2_nsl", false, true, false, false}, {"ex2_sl", true, false, false, false},
                            {"ex2_dc", true, false, true, true},    {"ex3_nsl", false, true, false, false},
                            {"ex3_sl", true, false, false, false}};
        int ok = 0;
        std::string bad;
        for (const auto& r : rows) {
            const auto v = cmd_classify(preset(r.name)).verdict;
            if (v.is_SL == r.sl && v.is_NSL == r.nsl && v.all_bath_equilibrium == r.eq &&
                v.lindblad_in_markov_secular == r.lindblad) {
                ++ok;
            } else {
                bad += std::string(" ") + r.name;
            }
        }
        return Outcome{ok == 7, std::to_string(ok) + "/7 presets match" + (bad.empty() ? "" : ", mismatched:" + bad)};
    });

    report(9, "RK4 convergence order", [] {
        const auto cfg = preset("ex2_dc");
        const auto built = build_scenario(cfg);
        const double dt = 0.02;
        auto final_rho = [&](double h) {
            EvolutionConfig evo;
            evo.dt = h;
            evo.t_max = cfg.evolve.t_max;
            evo.record_stride = static_cast<std::size_t>(std::llround(cfg.evolve.t_max / h));
            return evolve(built.state, built.system, built.bath, evo).rho.back();
        };
        const CMatrix ref = final_rho(dt / 8.0);
        const double e1 = (final_rho(dt) - ref).cwiseAbs().maxCoeff();
        const double e2 = (final_rho(dt / 2.0) - ref).cwiseAbs().maxCoeff();
        std::ostringstream d;
        d << "error(dt=" << dt << ") " << e1 << ", error(dt/2) " << e2 << ", ratio " << e1 / e2 << " (>= 12)";
        return Outcome{e1 / e2 >= 12.0, d.str()};
    });

    report(10, "Markovian rates", [] {
        const SpectralDensity j{};
        const auto r = rate_at(j, 1.0, PrincipalValueOptions{});
        std::ostringstream d;
        d.precision(8);
        d << "Re gamma(1) " << r.re_gamma << " vs 0.012861 (tol 1e-6), pi J(1) " << std::numbers::pi * j(1.0)
          << ", Im gamma(1) " << r.im_gamma << ", excision-halving change " << r.pv_stability << " (< 1e-4)";
        return Outcome{std::abs(r.re_gamma - 0.012861) <= 1e-6 && r.pv_stability < 1e-4, d.str()};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
