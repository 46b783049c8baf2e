// cli.hpp: subcommands behind the `oqs` executable. Each command is callable
// directly; run_cli maps exceptions to exit codes.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "oqs/config.hpp"
#include "oqs/oracle.hpp"

namespace oqs {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitOracle = 4 };

Trajectory run_scenario(const ScenarioConfig& cfg);
void cmd_run(const ScenarioConfig& cfg, std::ostream& out);

// Sweep values from, from + step, ... up to `to` (a step wider than the range
// yields the single value `from`).
std::vector<double> sweep_values(double from, double to, double step);
// Writes run_NNN.csv files and sweep_index.csv into out_dir; returns the file names.
std::vector<std::string> cmd_sweep(const ScenarioConfig& cfg, const std::string& param, double from, double to,
                                   double step, const std::string& out_dir);

struct ClassifyResult {
    Classification verdict;
    std::string summary;  // e.g. "SL=no NSL=yes equilibrium=no lindblad=no"
    std::string text;     // summary, violations and a JSON block
};
ClassifyResult cmd_classify(const ScenarioConfig& cfg);

struct OracleOptions {
    int modes{30};
    int max_exc{2};
    double omega_max{10.0};
    double record_dt{0.05};
    bool scaling{false};
    bool leakage_check{true};
};

struct OracleRun {
    std::vector<double> times;
    Comparison comparison;
    LeakageReport leakage;
    double scaling_factor{0.0};  // max distance at alpha over max distance at alpha / 2
    double half_alpha_distance{0.0};
};

// Master equation versus exact dynamics on the reduced grid (modes, omega_max).
OracleRun cmd_oracle(const ScenarioConfig& cfg, const OracleOptions& opt);
void write_oracle_csv(std::ostream& os, const OracleRun& run);

void cmd_rates(const ScenarioConfig& cfg, const std::vector<double>& omegas, std::ostream& out);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace oqs
