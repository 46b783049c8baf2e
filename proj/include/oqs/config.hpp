// config.hpp: strict JSON scenario configuration and its translation into a
// system, a discretized bath and an initial state.

#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

#include "oqs/evolution.hpp"
#include "oqs/presets.hpp"

namespace oqs {

struct SystemSection {
    std::string type{"two_level"};  // two_level | v_atom
    double omega1{1.0};
    double omega2{0.5};
    double epsilon_L{0.0};
    double omega_L{0.0};
};

struct BathSection {
    double alpha{0.005};
    double s{0.5};
    double omega_c{5.0};
    double omega_max{100.0};
    int n_modes{300};
};

// One dyad w |ket><bra| of an explicit bath factor; occupations as (mode, count).
struct DyadSpec {
    Complex weight{1.0, 0.0};
    std::vector<std::pair<int, int>> ket;
    std::vector<std::pair<int, int>> bra;
};

struct TermSpec {
    CMatrix phi_s;
    std::vector<DyadSpec> phi_b;
    std::string label;
};

// Preset names: ex1_nsl ex1_sl ex2_nsl ex2_sl ex2_dc ex3_nsl ex3_sl, or
// "explicit" together with a term list. Unset amplitudes keep preset defaults.
struct InitialSection {
    std::string preset{"ex2_dc"};
    std::optional<double> A, B, C;
    std::optional<double> A2, B2;  // second mixture component (ex2)
    std::optional<double> sigma, sigma2;
    std::optional<double> k0;
    int max_exc{2};
    std::vector<TermSpec> terms;
};

struct EvolveSection {
    double dt{2.5e-3};
    double t_max{10.0};
    std::size_t record_stride{1};
};

struct ScenarioConfig {
    SystemSection system;
    BathSection bath;
    InitialSection initial;
    EvolveSection evolve;
};

// Throws ConfigError naming the offending field path (and line for syntax errors).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);
std::string serialize_config(const ScenarioConfig& cfg);

struct BuiltScenario {
    SystemSpec system;
    InitialState state;
    SpectralDensity density;
    BathModel bath;  // lab frame
};

BuiltScenario build_scenario(const ScenarioConfig& cfg);
EvolutionConfig evolution_config(const ScenarioConfig& cfg);

// Sweepable parameters: omega1, epsilon_L, alpha, sigma.
void set_parameter(ScenarioConfig& cfg, const std::string& name, double value);

}  // namespace oqs
