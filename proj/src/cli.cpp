#include "oqs/cli.hpp"

#include "CLI11.hpp"
#include "oqs/csv.hpp"
#include "oqs/lindblad.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace oqs {

Trajectory run_scenario(const ScenarioConfig& cfg) {
    const auto built = build_scenario(cfg);
    return evolve(built.state, built.system, built.bath, evolution_config(cfg));
}

void cmd_run(const ScenarioConfig& cfg, std::ostream& out) { write_trajectory_csv(out, run_scenario(cfg)); }

std::vector<double> sweep_values(double from, double to, double step) {
    if (!(step > 0.0)) throw ConfigError("sweep: step must be positive");
    if (to < from) throw ConfigError("sweep: empty range");
    // tolerate accumulated rounding in (to - from) / step
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> v;
    for (std::size_t k = 0; k < n; ++k) v.push_back(from + static_cast<double>(k) * step);
    return v;
}

std::vector<std::string> cmd_sweep(const ScenarioConfig& cfg, const std::string& param, double from, double to,
                                   double step, const std::string& out_dir) {
    const auto values = sweep_values(from, to, step);
    ScenarioConfig probe = cfg;
    set_parameter(probe, param, from);  // reject unknown names before any run
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> names;
    std::ofstream index(std::filesystem::path(out_dir) / "sweep_index.csv");
    index << "value,filename\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        ScenarioConfig c = cfg;
        set_parameter(c, param, values[k]);
        std::ostringstream name;
        name << "run_" << std::setw(3) << std::setfill('0') << k << ".csv";
        std::ofstream f(std::filesystem::path(out_dir) / name.str());
        cmd_run(c, f);
        index << format_number(values[k]) << ',' << name.str() << '\n';
        names.push_back(name.str());
    }
    return names;
}

ClassifyResult cmd_classify(const ScenarioConfig& cfg) {
    const auto built = build_scenario(cfg);
    ClassifyResult r;
    r.verdict = classify(built.state);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream s;
    s << "SL=" << yn(r.verdict.is_SL);
    if (!r.verdict.is_SL) s << " NSL=" << yn(r.verdict.is_NSL);
    s << " equilibrium=" << yn(r.verdict.all_bath_equilibrium) << " lindblad=" << yn(r.verdict.lindblad_in_markov_secular);
    r.summary = s.str();

    nlohmann::ordered_json j;
    j["SL"] = r.verdict.is_SL;
    j["NSL"] = r.verdict.is_NSL;
    j["equilibrium"] = r.verdict.all_bath_equilibrium;
    j["lindblad"] = r.verdict.lindblad_in_markov_secular;
    j["terms"] = built.state.terms.size();
    std::ostringstream t;
    t << r.summary << '\n' << r.verdict.report;
    if (!r.verdict.report.empty() && r.verdict.report.back() != '\n') t << '\n';
    t << j.dump() << '\n';
    r.text = t.str();
    return r;
}

namespace {

struct OracleSetup {
    BuiltScenario built;
    EvolutionConfig evo;
};

OracleSetup oracle_setup(ScenarioConfig cfg, const OracleOptions& opt) {
    cfg.bath.n_modes = opt.modes;
    cfg.bath.omega_max = opt.omega_max;
    OracleSetup s{build_scenario(cfg), evolution_config(cfg)};
    s.evo.record_stride = std::max<std::size_t>(
        cfg.evolve.record_stride, static_cast<std::size_t>(std::llround(opt.record_dt / cfg.evolve.dt)));
    return s;
}

std::pair<Trajectory, std::vector<CMatrix>> oracle_pair(const OracleSetup& s, int max_exc) {
    Trajectory traj = evolve(s.built.state, s.built.system, s.built.bath, s.evo);
    auto exact = exact_evolve(s.built.state, s.built.system, s.built.bath, max_exc, traj.times);
    return {std::move(traj), std::move(exact)};
}

}  // namespace

OracleRun cmd_oracle(const ScenarioConfig& cfg, const OracleOptions& opt) {
    const auto setup = oracle_setup(cfg, opt);
    auto [traj, exact] = oracle_pair(setup, opt.max_exc);
    OracleRun run;
    run.times = traj.times;
    run.comparison = compare(traj, exact);
    if (opt.leakage_check) {
        run.leakage = check_truncation(setup.built.state, setup.built.system, setup.built.bath, opt.max_exc, traj.times,
                                       exact);
    }
    if (opt.scaling) {
        ScenarioConfig half = cfg;
        half.bath.alpha /= 2.0;
        const auto hs = oracle_setup(half, opt);
        auto [t2, e2] = oracle_pair(hs, opt.max_exc);
        run.half_alpha_distance = compare(t2, e2).max_distance;
        run.scaling_factor = run.half_alpha_distance > 0.0 ? run.comparison.max_distance / run.half_alpha_distance
                                                           : std::numeric_limits<double>::infinity();
    }
    return run;
}

void write_oracle_csv(std::ostream& os, const OracleRun& run) {
    os << "t,trace_distance\n";
    for (std::size_t k = 0; k < run.times.size(); ++k)
        os << format_number(run.times[k]) << ',' << format_number(run.comparison.distance[k]) << '\n';
}

void cmd_rates(const ScenarioConfig& cfg, const std::vector<double>& omegas, std::ostream& out) {
    const auto built = build_scenario(cfg);
    PrincipalValueOptions pv;
    pv.omega_max = cfg.bath.omega_max;
    const RVector n = mean_occupation(built.state);
    const auto occ = n.isZero(0.0) ? std::function<double(double)>{} : occupation_profile(built.bath, n);
    out << "omega,re_gamma,im_gamma,re_gamma_beq\n";
    for (double w : omegas) {
        RateEntry e;
        try {
            e = rate_at(built.density, w, pv, occ);
        } catch (const std::domain_error& ex) {
            throw ConfigError(std::string("rates: ") + ex.what());
        }
        out << format_number(w) << ',' << format_number(e.re_gamma) << ',' << format_number(e.im_gamma) << ','
            << format_number(e.re_gamma_beq) << '\n';
    }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Second-order master equation simulator for open quantum systems"};
    app.require_subcommand(1);
    std::string config, out_path, out_dir, param;
    double from = 0, to = 0, step = 0;
    OracleOptions oopt;
    std::vector<double> omegas;

    auto* run = app.add_subcommand("run", "integrate a scenario and write its trajectory CSV");
    run->add_option("--config", config)->required();
    run->add_option("--out", out_path)->required();

    auto* sweep = app.add_subcommand("sweep", "run a parameter family");
    sweep->add_option("--config", config)->required();
    sweep->add_option("--param", param)->required();
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--step", step)->required();
    sweep->add_option("--out-dir", out_dir)->required();

    auto* cls = app.add_subcommand("classify", "classify the initial state");
    cls->add_option("--config", config)->required();

    auto* orc = app.add_subcommand("oracle", "compare against exact truncated dynamics");
    orc->add_option("--config", config)->required();
    orc->add_option("--modes", oopt.modes);
    orc->add_option("--max-exc", oopt.max_exc);
    orc->add_option("--omega-max", oopt.omega_max);
    orc->add_flag("--scaling", oopt.scaling);
    orc->add_option("--out", out_path, "CSV destination (default stdout)");

    auto* rates = app.add_subcommand("rates", "Markovian rate table");
    rates->add_option("--config", config)->required();
    rates->add_option("--omega", omegas)->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const ScenarioConfig cfg = load_config(config);
        if (*run) {
            std::ofstream f(out_path);
            if (!f) throw ConfigError("cannot write " + out_path);
            cmd_run(cfg, f);
        } else if (*sweep) {
            const auto files = cmd_sweep(cfg, param, from, to, step, out_dir);
            out << files.size() << " runs written to " << out_dir << '\n';
        } else if (*cls) {
            out << cmd_classify(cfg).text;
        } else if (*orc) {
            const auto r = cmd_oracle(cfg, oopt);
            if (out_path.empty()) {
                write_oracle_csv(out, r);
            } else {
                std::ofstream f(out_path);
                write_oracle_csv(f, r);
            }
            err << "max_trace_distance=" << format_number(r.comparison.max_distance) << '\n';
            if (oopt.scaling) err << "scaling_factor=" << format_number(r.scaling_factor) << '\n';
            if (!r.leakage.converged) {
                err << "truncation leakage: rho_s changes by " << format_number(r.leakage.max_change)
                    << " at max_exc + 1\n";
                return kExitOracle;
            }
        } else if (*rates) {
            cmd_rates(cfg, omegas, out);
        }
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    } catch (const OracleLimitError& e) {
        err << e.what() << '\n';
        return kExitOracle;
    } catch (const NumericalError& e) {
        err << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace oqs
