#include "oqs/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace oqs {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

// Rejects keys outside `allowed` so typos never pass silently.
void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
}

std::optional<double> get_optional(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return get_number(obj, path, key, 0.0);
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

Complex parse_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(path, "expected a number or [re, im]");
}

json complex_json(Complex c) {
    if (c.imag() == 0.0) return c.real();
    return json::array({c.real(), c.imag()});
}

std::vector<std::pair<int, int>> parse_occupation(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected a list of [mode, count] pairs");
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& e = v[i];
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            fail(p, "expected [mode, count]");
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

TermSpec parse_term(const json& t, const std::string& path) {
    check_keys(t, path, {"phi_s", "phi_b", "label"});
    TermSpec spec;
    spec.label = get_string(t, path, "label", "");
    if (!t.contains("phi_s") || !t.at("phi_s").is_array() || t.at("phi_s").empty())
        fail(join(path, "phi_s"), "expected a square matrix");
    const auto& rows = t.at("phi_s");
    const auto d = static_cast<Eigen::Index>(rows.size());
    spec.phi_s = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        const std::string rp = join(path, "phi_s") + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) fail(rp, "row length differs from row count");
        for (Eigen::Index j = 0; j < d; ++j)
            spec.phi_s(i, j) = parse_complex(row[static_cast<std::size_t>(j)], rp + "[" + std::to_string(j) + "]");
    }
    if (!t.contains("phi_b") || !t.at("phi_b").is_array()) fail(join(path, "phi_b"), "expected a list of dyads");
    const auto& dy = t.at("phi_b");
    for (std::size_t k = 0; k < dy.size(); ++k) {
        const std::string dp = join(path, "phi_b") + "[" + std::to_string(k) + "]";
        check_keys(dy[k], dp, {"w", "ket", "bra"});
        DyadSpec d;
        if (dy[k].contains("w")) d.weight = parse_complex(dy[k].at("w"), join(dp, "w"));
        if (dy[k].contains("ket")) d.ket = parse_occupation(dy[k].at("ket"), join(dp, "ket"));
        if (dy[k].contains("bra")) d.bra = parse_occupation(dy[k].at("bra"), join(dp, "bra"));
        spec.phi_b.push_back(std::move(d));
    }
    return spec;
}

json occupation_json(const std::vector<std::pair<int, int>>& occ) {
    json a = json::array();
    for (const auto& [m, n] : occ) a.push_back({m, n});
    return a;
}

const std::set<std::string> kPresets{"ex1_nsl", "ex1_sl", "ex2_nsl", "ex2_sl", "ex2_dc", "ex3_nsl", "ex3_sl", "explicit"};

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    check_keys(root, "", {"system", "bath", "initial", "evolve"});
    ScenarioConfig cfg;

    if (root.contains("system")) {
        const auto& s = root.at("system");
        check_keys(s, "system", {"type", "omega1", "omega2", "epsilon_L", "omega_L"});
        cfg.system.type = get_string(s, "system", "type", cfg.system.type);
        if (cfg.system.type != "two_level" && cfg.system.type != "v_atom")
            fail("system.type", "must be two_level or v_atom");
        cfg.system.omega1 = get_number(s, "system", "omega1", cfg.system.omega1);
        cfg.system.omega2 = get_number(s, "system", "omega2", cfg.system.omega2);
        cfg.system.epsilon_L = get_number(s, "system", "epsilon_L", cfg.system.epsilon_L);
        cfg.system.omega_L = get_number(s, "system", "omega_L", cfg.system.omega_L);
    }
    if (root.contains("bath")) {
        const auto& b = root.at("bath");
        check_keys(b, "bath", {"alpha", "s", "omega_c", "omega_max", "n_modes"});
        cfg.bath.alpha = get_number(b, "bath", "alpha", cfg.bath.alpha);
        cfg.bath.s = get_number(b, "bath", "s", cfg.bath.s);
        cfg.bath.omega_c = get_number(b, "bath", "omega_c", cfg.bath.omega_c);
        cfg.bath.omega_max = get_number(b, "bath", "omega_max", cfg.bath.omega_max);
        cfg.bath.n_modes = get_int(b, "bath", "n_modes", cfg.bath.n_modes);
        if (cfg.bath.alpha < 0.0) fail("bath.alpha", "must be non-negative");
        if (cfg.bath.omega_c <= 0.0) fail("bath.omega_c", "must be positive");
        if (cfg.bath.omega_max <= 0.0) fail("bath.omega_max", "must be positive");
        if (cfg.bath.n_modes < 1) fail("bath.n_modes", "must be at least 1");
    }
    if (root.contains("initial")) {
        const auto& i = root.at("initial");
        check_keys(i, "initial", {"preset", "A", "B", "C", "A2", "B2", "sigma", "sigma2", "k0", "max_exc", "terms"});
        auto& in = cfg.initial;
        in.preset = get_string(i, "initial", "preset", in.preset);
        if (!kPresets.contains(in.preset)) fail("initial.preset", "unknown preset '" + in.preset + "'");
        in.A = get_optional(i, "initial", "A");
        in.B = get_optional(i, "initial", "B");
        in.C = get_optional(i, "initial", "C");
        in.A2 = get_optional(i, "initial", "A2");
        in.B2 = get_optional(i, "initial", "B2");
        in.sigma = get_optional(i, "initial", "sigma");
        in.sigma2 = get_optional(i, "initial", "sigma2");
        in.k0 = get_optional(i, "initial", "k0");
        in.max_exc = get_int(i, "initial", "max_exc", in.max_exc);
        if (in.max_exc < 1) fail("initial.max_exc", "must be at least 1");
        for (const auto* key : {"sigma", "sigma2"})
            if (auto v = get_optional(i, "initial", key); v && *v <= 0.0) fail(join("initial", key), "must be positive");
        if (i.contains("terms")) {
            if (!i.at("terms").is_array()) fail("initial.terms", "expected a list");
            for (std::size_t k = 0; k < i.at("terms").size(); ++k)
                in.terms.push_back(parse_term(i.at("terms")[k], "initial.terms[" + std::to_string(k) + "]"));
        }
        if (in.preset == "explicit" && in.terms.empty()) fail("initial.terms", "explicit preset needs a term list");
        if (in.preset != "explicit" && !in.terms.empty()) fail("initial.terms", "only allowed with preset explicit");
    }
    if (root.contains("evolve")) {
        const auto& e = root.at("evolve");
        check_keys(e, "evolve", {"dt", "t_max", "record_stride"});
        cfg.evolve.dt = get_number(e, "evolve", "dt", cfg.evolve.dt);
        cfg.evolve.t_max = get_number(e, "evolve", "t_max", cfg.evolve.t_max);
        const int stride = get_int(e, "evolve", "record_stride", static_cast<int>(cfg.evolve.record_stride));
        if (stride < 1) fail("evolve.record_stride", "must be at least 1");
        cfg.evolve.record_stride = static_cast<std::size_t>(stride);
        if (!(cfg.evolve.dt > 0.0)) fail("evolve.dt", "must be positive");
        if (!(cfg.evolve.t_max >= 0.0)) fail("evolve.t_max", "must be non-negative");
    }

    const std::string& p = cfg.initial.preset;
    if (p.starts_with("ex1") && cfg.system.type != "v_atom") fail("system.type", "preset " + p + " needs v_atom");
    if ((p.starts_with("ex2") || p.starts_with("ex3")) && cfg.system.type != "two_level")
        fail("system.type", "preset " + p + " needs two_level");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json to_json(const ScenarioConfig& cfg) {
    nlohmann::ordered_json j;
    j["system"] = {{"type", cfg.system.type},
                   {"omega1", cfg.system.omega1},
                   {"omega2", cfg.system.omega2},
                   {"epsilon_L", cfg.system.epsilon_L},
                   {"omega_L", cfg.system.omega_L}};
    j["bath"] = {{"alpha", cfg.bath.alpha},
                 {"s", cfg.bath.s},
                 {"omega_c", cfg.bath.omega_c},
                 {"omega_max", cfg.bath.omega_max},
                 {"n_modes", cfg.bath.n_modes}};
    auto& in = j["initial"];
    in["preset"] = cfg.initial.preset;
    const std::pair<const char*, const std::optional<double>*> opts[] = {
        {"A", &cfg.initial.A},         {"B", &cfg.initial.B},           {"C", &cfg.initial.C},
        {"A2", &cfg.initial.A2},       {"B2", &cfg.initial.B2},         {"sigma", &cfg.initial.sigma},
        {"sigma2", &cfg.initial.sigma2}, {"k0", &cfg.initial.k0}};
    for (const auto& [key, v] : opts)
        if (v->has_value()) in[key] = **v;
    in["max_exc"] = cfg.initial.max_exc;
    if (!cfg.initial.terms.empty()) {
        auto& terms = in["terms"] = nlohmann::ordered_json::array();
        for (const auto& t : cfg.initial.terms) {
            nlohmann::ordered_json tj;
            json rows = json::array();
            for (Eigen::Index r = 0; r < t.phi_s.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index c = 0; c < t.phi_s.cols(); ++c) row.push_back(complex_json(t.phi_s(r, c)));
                rows.push_back(row);
            }
            tj["phi_s"] = rows;
            json dyads = json::array();
            for (const auto& d : t.phi_b)
                dyads.push_back({{"w", complex_json(d.weight)}, {"ket", occupation_json(d.ket)}, {"bra", occupation_json(d.bra)}});
            tj["phi_b"] = dyads;
            if (!t.label.empty()) tj["label"] = t.label;
            terms.push_back(tj);
        }
    }
    j["evolve"] = {{"dt", cfg.evolve.dt}, {"t_max", cfg.evolve.t_max}, {"record_stride", cfg.evolve.record_stride}};
    return j;
}

std::string serialize_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
    BuiltScenario out;
    out.density = SpectralDensity{cfg.bath.alpha, cfg.bath.s, cfg.bath.omega_c};
    out.bath = discretize(out.density, cfg.bath.omega_max, cfg.bath.n_modes);
    const auto& in = cfg.initial;
    const auto& sys = cfg.system;
    const std::string& p = in.preset;
    const double k0 = in.k0.value_or(std::numeric_limits<double>::quiet_NaN());

    try {
        Scenario sc;
        if (p.starts_with("ex1")) {
            Example1Params e;
            e.A = in.A.value_or(e.A);
            e.B = in.B.value_or(e.B);
            e.C = in.C.value_or(e.C);
            e.sigma = in.sigma.value_or(e.sigma);
            e.k0 = k0;
            e.omega1 = sys.omega1;
            e.omega2 = sys.omega2;
            e.epsilon_L = sys.epsilon_L;
            e.omega_L = sys.omega_L;
            e.max_exc = in.max_exc;
            sc = build_example1(p == "ex1_nsl" ? PresetKind::NSL : PresetKind::SL, e, out.bath);
        } else if (p.starts_with("ex2")) {
            Example2Params e;
            if (p == "ex2_dc") {
                e.A_dc = in.A.value_or(e.A_dc);
                e.B_dc = in.B.value_or(e.B_dc);
            } else {
                e.A[0] = in.A.value_or(e.A[0]);
                e.B[0] = in.B.value_or(e.B[0]);
                e.A[1] = in.A2.value_or(e.A[1]);
                e.B[1] = in.B2.value_or(e.B[1]);
                e.sigma[0] = in.sigma.value_or(e.sigma[0]);
                e.sigma[1] = in.sigma2.value_or(e.sigma[1]);
            }
            e.k0 = k0;
            e.omega1 = sys.omega1;
            e.max_exc = in.max_exc;
            const PresetKind kind = p == "ex2_dc" ? PresetKind::DC : p == "ex2_nsl" ? PresetKind::NSL : PresetKind::SL;
            sc = build_example2(kind, e, out.bath);
        } else if (p.starts_with("ex3")) {
            Example3Params e;
            e.A = in.A.value_or(e.A);
            e.B = in.B.value_or(e.B);
            e.sigma = in.sigma.value_or(e.sigma);
            e.k0 = k0;
            e.omega1 = sys.omega1;
            e.max_exc = in.max_exc;
            sc = build_example3(p == "ex3_nsl" ? PresetKind::NSL : PresetKind::SL, e, out.bath);
        } else {
            sc.system = sys.type == "v_atom" ? v_atom_system(sys.omega1, sys.omega2, sys.epsilon_L, sys.omega_L)
                                             : two_level_system(sys.omega1);
            const Eigen::Index n = out.bath.size();
            std::vector<GammaTerm> terms;
            for (std::size_t k = 0; k < in.terms.size(); ++k) {
                const auto& t = in.terms[k];
                if (t.phi_s.rows() != sc.system.dim())
                    fail("initial.terms[" + std::to_string(k) + "].phi_s", "dimension differs from the system");
                FockOperator phi(static_cast<int>(n), in.max_exc);
                for (const auto& d : t.phi_b) {
                    std::vector<OccupationIndex::Entry> ket(d.ket.begin(), d.ket.end()), bra(d.bra.begin(), d.bra.end());
                    phi.add_dyad(d.weight, {{OccupationIndex(ket), 1.0}}, {{OccupationIndex(bra), 1.0}});
                }
                phi.validate();
                terms.push_back(make_term(t.phi_s, std::move(phi), n, t.label.empty() ? "t" + std::to_string(k) : t.label));
            }
            sc.state = make_initial_state(std::move(terms));
        }
        out.system = std::move(sc.system);
        out.state = std::move(sc.state);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: initial: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(std::string("config: initial: ") + e.what());
    }
    return out;
}

EvolutionConfig evolution_config(const ScenarioConfig& cfg) {
    EvolutionConfig e;
    e.dt = cfg.evolve.dt;
    e.t_max = cfg.evolve.t_max;
    e.record_stride = cfg.evolve.record_stride;
    return e;
}

void set_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
    if (name == "omega1") {
        cfg.system.omega1 = value;
    } else if (name == "epsilon_L") {
        if (cfg.system.type != "v_atom") throw ConfigError("config: epsilon_L only applies to a v_atom system");
        cfg.system.epsilon_L = value;
    } else if (name == "alpha") {
        if (value < 0.0) throw ConfigError("config: alpha must be non-negative");
        cfg.bath.alpha = value;
    } else if (name == "sigma") {
        if (value <= 0.0) throw ConfigError("config: sigma must be positive");
        if (cfg.initial.preset == "ex2_dc" || cfg.initial.preset == "explicit")
            throw ConfigError("config: sigma has no effect on preset '" + cfg.initial.preset + "'");
        cfg.initial.sigma = value;
    } else {
        throw ConfigError("config: parameter '" + name + "' is not sweepable (omega1, epsilon_L, alpha, sigma)");
    }
}

}  // namespace oqs
