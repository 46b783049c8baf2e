#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oqs/cli.hpp"
#include "oqs/csv.hpp"

using namespace oqs;
namespace fs = std::filesystem;

namespace {

std::string preset_path(const std::string& name) { return std::string(OQS_PRESET_DIR) + "/" + name + ".json"; }

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("oqs_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p.string();
}

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "oqs");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    for (std::string c; std::getline(is, c, ',');) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("config round trip") {
    for (const char* name : {"ex1_nsl", "ex1_sl", "ex2_nsl", "ex2_sl", "ex2_dc", "ex3_nsl", "ex3_sl"}) {
        CAPTURE(name);
        const auto cfg = load_config(preset_path(name));
        const std::string text = serialize_config(cfg);
        CHECK(serialize_config(parse_config(text)) == text);
    }
    const auto explicit_cfg = load_config(std::string(OQS_TEST_DATA_DIR) + "/two_photon.json");
    CHECK(explicit_cfg.initial.terms.size() == 1);
    CHECK(explicit_cfg.initial.terms[0].phi_b.size() == 9);
    CHECK(serialize_config(parse_config(serialize_config(explicit_cfg))) == serialize_config(explicit_cfg));
}

TEST_CASE("config errors name the offending field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"bath": {"alpah": 0.1}})"), doctest::Contains("bath.alpah: unknown key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"bath": {"n_modes": "many"}})"), doctest::Contains("bath.n_modes"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("{\n  \"system\": {\n    \"omega1\": ,\n  }\n}"), doctest::Contains("line 3"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"initial": {"preset": "ex9"}})"), doctest::Contains("initial.preset"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"system": {"type": "two_level"}, "initial": {"preset": "ex1_nsl"}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/oqs.json"), ConfigError);
}

TEST_CASE("sweepable parameters") {
    auto cfg = load_config(preset_path("ex1_nsl"));
    set_parameter(cfg, "epsilon_L", 0.015);
    CHECK(cfg.system.epsilon_L == 0.015);
    set_parameter(cfg, "omega1", 1.5);
    CHECK(cfg.system.omega1 == 1.5);
    set_parameter(cfg, "alpha", 0.01);
    CHECK(cfg.bath.alpha == 0.01);
    CHECK_THROWS_AS(set_parameter(cfg, "alpha", -1.0), ConfigError);
    CHECK_THROWS_AS(set_parameter(cfg, "sigma", 0.0), ConfigError);
    auto dc = load_config(preset_path("ex2_dc"));
    CHECK_THROWS_AS(set_parameter(dc, "epsilon_L", 0.01), ConfigError);
    CHECK_THROWS_AS(set_parameter(dc, "sigma", 0.3), ConfigError);
    CHECK_THROWS_WITH_AS(set_parameter(cfg, "dt", 0.1), doctest::Contains("not sweepable"), ConfigError);
}

TEST_CASE("sweep value grids") {
    const auto w = sweep_values(0.1, 3.1, 0.2);
    REQUIRE(w.size() == 16);
    CHECK(w.front() == doctest::Approx(0.1));
    CHECK(w.back() == doctest::Approx(3.1));
    CHECK(sweep_values(0.0, 0.02, 0.001).size() == 21);
    CHECK(sweep_values(1.0, 1.5, 2.0).size() == 1);
    CHECK(sweep_values(1.0, 1.0, 0.1).size() == 1);
    CHECK_THROWS_AS(sweep_values(1.0, 0.5, 0.1), ConfigError);
    CHECK_THROWS_AS(sweep_values(0.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(0.0128616) == "0.0128616");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(1e-12) == "1e-12");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("trajectory CSV layout") {
    auto cfg = load_config(preset_path("ex1_nsl"));
    cfg.evolve.t_max = 0.1;
    std::ostringstream os;
    cmd_run(cfg, os);
    const auto rows = lines(os.str());
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == "t,pop_0,pop_1,pop_2,sigma_z,entropy,rate,trace_err");
    const auto first = split(rows[1]);
    REQUIRE(first.size() == 8);
    CHECK(first[0] == "0");
    CHECK(std::stod(first[1]) == doctest::Approx(0.25));
    CHECK(std::stod(first[5]) == doctest::Approx(0.562335).epsilon(1e-6));
    CHECK(split(rows.back())[0] == "0.1");
}

TEST_CASE("preset runs start from their initial entropies") {
    for (const char* name : {"ex1_sl", "ex3_sl", "ex3_nsl"}) {
        CAPTURE(name);
        auto cfg = load_config(preset_path(name));
        cfg.evolve.t_max = 0.01;
        const auto traj = run_scenario(cfg);
        if (std::string(name).find("_sl") != std::string::npos) {
            CHECK(std::abs(traj.entropy.front()) < 1e-10);
        } else {
            CHECK(traj.entropy.front() > 0.1);
        }
    }
}

TEST_CASE("classification summaries") {
    CHECK(cmd_classify(load_config(preset_path("ex2_dc"))).summary == "SL=yes equilibrium=yes lindblad=yes");
    CHECK(cmd_classify(load_config(preset_path("ex3_sl"))).summary == "SL=yes equilibrium=no lindblad=no");
    const auto nsl = cmd_classify(load_config(preset_path("ex1_nsl")));
    CHECK(nsl.summary == "SL=no NSL=yes equilibrium=no lindblad=no");
    CHECK(nsl.text.find("\"NSL\":true") != std::string::npos);
    CHECK(nsl.text.find("\"terms\":4") != std::string::npos);
}

TEST_CASE("rate table CSV") {
    std::ostringstream os;
    cmd_rates(load_config(preset_path("ex2_dc")), {1.0, 2.5}, os);
    const auto rows = lines(os.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "omega,re_gamma,im_gamma,re_gamma_beq");
    CHECK(std::stod(split(rows[1])[1]) == doctest::Approx(0.012861).epsilon(1e-6 / 0.012861));
    CHECK(std::stod(split(rows[2])[1]) > std::stod(split(rows[1])[1]));
    CHECK(split(rows[1])[3] == "0");
    std::ostringstream bad;
    CHECK_THROWS_AS(cmd_rates(load_config(preset_path("ex2_dc")), {-1.0}, bad), ConfigError);
}

TEST_CASE("sweep writes one file per value plus an index") {
    auto cfg = load_config(preset_path("ex2_dc"));
    cfg.evolve.t_max = 0.05;
    const auto dir = scratch_dir("sweep");
    const auto files = cmd_sweep(cfg, "omega1", 0.1, 0.5, 0.2, dir.string());
    CHECK(files.size() == 3);
    for (const auto& f : files) CHECK(fs::exists(dir / f));
    CHECK(fs::exists(dir / "sweep_index.csv"));
    std::ifstream idx(dir / "sweep_index.csv");
    std::stringstream ss;
    ss << idx.rdbuf();
    CHECK(lines(ss.str()).size() == 4);
}

TEST_CASE("command-line front end and exit codes") {
    const auto dir = scratch_dir("cli");
    const std::string quick =
        write_file(dir / "quick.json", R"({"system": {"type": "two_level", "omega1": 1.0},
            "initial": {"preset": "ex2_dc"}, "evolve": {"dt": 0.01, "t_max": 1.0, "record_stride": 10}})");

    auto r = cli({"run", "--config", quick, "--out", (dir / "run.csv").string()});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir / "run.csv"));

    r = cli({"classify", "--config", preset_path("ex3_nsl")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("SL=no NSL=yes", 0) == 0);

    r = cli({"rates", "--config", quick, "--omega", "1,2.5"});
    CHECK(r.code == kExitOk);
    CHECK(lines(r.out).size() == 3);
    CHECK(cli({"rates", "--config", quick, "--omega", "0"}).code == kExitConfig);

    r = cli({"sweep", "--config", quick, "--param", "epsilon_L", "--from", "0", "--to", "0.01", "--step", "0.005",
             "--out-dir", (dir / "sw").string()});
    CHECK(r.code == kExitConfig);  // epsilon_L needs a V-atom
    r = cli({"sweep", "--config", quick, "--param", "alpha", "--from", "0", "--to", "0.01", "--step", "0.005",
             "--out-dir", (dir / "sw").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("3 runs", 0) == 0);

    r = cli({"oracle", "--config", quick, "--modes", "6", "--omega-max", "5"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("t,trace_distance", 0) == 0);
    CHECK(r.err.find("max_trace_distance=") != std::string::npos);

    const std::string strong = write_file(dir / "strong.json", R"({"system": {"type": "two_level", "omega1": 1.0},
        "bath": {"alpha": 0.5, "s": 1.0, "omega_c": 5.0},
        "initial": {"preset": "ex2_dc"}, "evolve": {"dt": 0.01, "t_max": 2.0, "record_stride": 10}})");
    r = cli({"oracle", "--config", strong, "--modes", "5", "--max-exc", "1", "--omega-max", "5"});
    CHECK(r.code == kExitOracle);
    CHECK(r.err.find("leakage") != std::string::npos);
    CHECK(cli({"oracle", "--config", quick, "--modes", "300", "--max-exc", "3"}).code == kExitOracle);

    CHECK(cli({"run", "--config", write_file(dir / "bad.json", R"({"bath": {"s": 0.5, "q": 1}})"), "--out",
               (dir / "x.csv").string()})
              .code == kExitConfig);
    CHECK(cli({"run", "--config", (dir / "missing.json").string(), "--out", (dir / "x.csv").string()}).code ==
          kExitConfig);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({"--help"}).code == kExitOk);
}
