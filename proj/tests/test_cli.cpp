#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dcfcap/cli.hpp"
#include "dcfcap/config.hpp"
#include "dcfcap/csv.hpp"
#include "dcfcap/sweep.hpp"

using namespace dcfcap;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "dcfcap-tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// run_cli prints through std::printf and std::cout; capture only the
// std::cout side (help text), which is all these tests inspect.
struct CoutCapture {
    std::ostringstream buffer;
    std::streambuf* saved;
    CoutCapture() : saved(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(saved); }
};

}  // namespace

TEST_CASE("defaults match the standard parameter table") {
    const RunConfig cfg;
    CHECK(cfg.stations == 10);
    CHECK(cfg.w0 == 32);
    CHECK(cfg.m == 5);
    CHECK(cfg.payload_bytes == 1024);
    CHECK(cfg.mac_header_bytes == 24);
    CHECK(cfg.phy_header_bytes == 16);
    CHECK(cfg.ack_bytes == 14);
    CHECK(cfg.nak_bytes == 14);
    CHECK(cfg.basic_rate_mbps == 1.0);
    CHECK(cfg.data_rate_mbps == 11.0);
    CHECK(cfg.slot_us == 20.0);
    CHECK(cfg.sifs_us == 10.0);
    CHECK(cfg.difs_us == 50.0);
    CHECK(cfg.ack_timeout_us == 300.0);
    CHECK(cfg.prop_delay_us == 1.0);
    CHECK(cfg.spreading_factor == 11);

    const auto mac = cfg.mac();
    CHECK(mac.layout().phy_header_bits == 128);
    CHECK(mac.layout().mac_header_bits == 192);
}

TEST_CASE("an empty config file leaves the defaults") {
    RunConfig cfg;
    std::istringstream empty("\n# just a comment\n\n");
    apply_config_file(cfg, empty, "empty.conf");
    CHECK(cfg.stations == 10);
    CHECK(cfg.payload_bytes == 1024);
}

TEST_CASE("dB keys convert to linear exactly once, in the builders") {
    RunConfig cfg;
    std::istringstream text("sinr_db = 7\ncapture_db = 6 # threshold\n");
    apply_config_file(cfg, text, "chan.conf");
    CHECK(cfg.sinr_db == 7.0);
    const auto ch = cfg.channel();
    CHECK(ch.sinr == doctest::Approx(5.0118723362727229).epsilon(1e-14));
    CHECK(ch.capture.z0 == doctest::Approx(3.9810717055349725).epsilon(1e-14));
}

TEST_CASE("config errors carry the offending line") {
    RunConfig cfg;
    std::istringstream bad_value("stations = 5\nw0 = 0\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, bad_value, "bad.conf"),
                         doctest::Contains("bad.conf:2"), ConfigError);
    std::istringstream bad_value2("w0 = 0\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, bad_value2, "bad.conf"),
                         doctest::Contains("'w0'"), ConfigError);

    std::istringstream unknown("wmin = 32\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, unknown, "bad.conf"),
                         doctest::Contains("unknown key 'wmin'"), ConfigError);

    std::istringstream malformed("stations 5\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, malformed, "bad.conf"),
                         doctest::Contains("bad.conf:1"), ConfigError);
}

TEST_CASE("overrides win over file values") {
    RunConfig cfg;
    std::istringstream text("stations = 5\nsinr_db = 12\n");
    apply_config_file(cfg, text, "file.conf");
    apply_override(cfg, "stations=7");
    CHECK(cfg.stations == 7);
    CHECK(cfg.sinr_db == 12.0);
    CHECK_THROWS_AS(apply_override(cfg, "stations"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nope=1"), ConfigError);
}

TEST_CASE("mismatched control frame sizes are rejected at build time") {
    RunConfig cfg;
    apply_override(cfg, "nak_bytes=20");
    CHECK_THROWS_AS(cfg.mac(), ConfigError);
}

TEST_CASE("enum keys parse their full vocabulary") {
    RunConfig cfg;
    apply_override(cfg, "capture_semantics=aggregate");
    CHECK(cfg.capture_semantics == CaptureSemantics::Aggregate);
    apply_override(cfg, "error_accounting=lumped");
    CHECK(cfg.error_accounting == ErrorAccounting::Lumped);
    apply_override(cfg, "ser_formula=literal");
    CHECK(cfg.ser_formula == SerFormula::Literal);
    apply_override(cfg, "strict_timing=extended");
    CHECK(cfg.strict_timing_extended);
    apply_override(cfg, "capture_mode=sampled");
    CHECK(cfg.capture_mode == CaptureMode::Sampled);
    CHECK_THROWS_AS(apply_override(cfg, "capture_mode=magic"), ConfigError);
}

TEST_CASE("csv rendering is deterministic with nine significant digits") {
    Csv table;
    table.columns = {"x", "y"};
    table.rows = {{1.0, 0.123456789123}, {2.0, 3.0e-7}};
    const std::string a = render_csv(table);
    CHECK(a == render_csv(table));
    CHECK(a == "x,y\n1,0.123456789\n2,3e-07\n");
}

TEST_CASE("figure datasets carry the documented schemas") {
    const RunConfig cfg;
    const auto fig3 = figure("fig3", cfg, false);
    CHECK(fig3.columns == std::vector<std::string>{"sinr_db", "tau_model", "tau_bianchi"});
    CHECK(fig3.rows.size() == 31);

    const auto fig4 = figure("fig4", cfg, false);
    CHECK(fig4.columns == std::vector<std::string>{"stations", "s_model", "s_bianchi"});
    CHECK(fig4.rows.size() == 25);

    const auto fig5 = figure("fig5", cfg, false);
    CHECK(fig5.columns == std::vector<std::string>{"sinr_db", "s_z0_1db", "s_z0_10db",
                                                   "s_z0_30db", "s_bianchi"});

    const auto fig7 = figure("fig7", cfg, false);
    CHECK(fig7.columns == std::vector<std::string>{"sinr_db", "s_z0_6db", "s_z0_24db"});

    CHECK_THROWS_AS(figure("fig9", cfg, false), ConfigError);
}

TEST_CASE("figure invariants hold end to end") {
    const RunConfig cfg;
    const auto fig3 = figure("fig3", cfg, false);
    double prev = 0.0;
    for (const auto& row : fig3.rows) {
        CHECK(row[1] + 1e-10 >= prev);
        prev = row[1];
        CHECK(row[2] == doctest::Approx(fig3.rows.front()[2]));  // flat baseline
    }

    const auto fig7 = figure("fig7", cfg, false);
    for (const auto& row : fig7.rows) CHECK(row[1] + 1e-12 >= row[2]);
}

TEST_CASE("sweep covers the grid and annotates failures") {
    RunConfig cfg;
    apply_override(cfg, "sweep_axis=stations");
    apply_override(cfg, "sweep_start=2");
    apply_override(cfg, "sweep_stop=10");
    apply_override(cfg, "sweep_step=2");
    const auto table = run_sweep(cfg, false);
    CHECK(table.rows.size() == 5);
    CHECK(table.columns.front() == "stations");

    RunConfig zsweep;
    apply_override(zsweep, "sweep_axis=capture_db");
    apply_override(zsweep, "sweep_start=1");
    apply_override(zsweep, "sweep_stop=30");
    apply_override(zsweep, "sweep_step=5");
    const auto ztable = run_sweep(zsweep, false);
    CHECK(ztable.rows.size() == 6);
    // Throughput falls as the threshold climbs, row by row.
    for (std::size_t i = 1; i < ztable.rows.size(); ++i)
        CHECK(ztable.rows[i][2] <= ztable.rows[i - 1][2] + 1e-12);

    RunConfig doomed;
    apply_override(doomed, "stations=1");
    apply_override(doomed, "sweep_axis=sinr_db");
    apply_override(doomed, "sweep_start=0");
    apply_override(doomed, "sweep_stop=2");
    apply_override(doomed, "sweep_step=1");
    try {
        run_sweep(doomed, false);
        FAIL("expected SweepError");
    } catch (const SweepError& e) {
        CHECK(e.failures.size() == 3);
        CHECK(e.failures.front().find("sinr_db=0") != std::string::npos);
    }
}

TEST_CASE("cli end to end: figures, determinism, exit codes") {
    const auto dir = temp_dir();
    const auto out_a = dir / "fig3_a.csv";
    const auto out_b = dir / "fig3_b.csv";
    CHECK(run_cli({"figures", "fig3", "--out", out_a.string()}) == 0);
    CHECK(run_cli({"figures", "fig3", "--out", out_b.string()}) == 0);
    const auto bytes_a = slurp(out_a);
    CHECK(!bytes_a.empty());
    CHECK(bytes_a == slurp(out_b));

    // Usage and config errors exit 1.
    CHECK(run_cli({"figures", "fig9", "--out", (dir / "x.csv").string()}) == 1);
    CHECK(run_cli({"solve", "--set", "bogus=1"}) == 1);
    CHECK(run_cli({"nonsense"}) == 1);
    CHECK(run_cli({}) == 1);

    // Solver failures exit 2, naming the failing grid point.
    CHECK(run_cli({"sweep", "--set", "stations=1", "--set", "sweep_axis=sinr_db",
                   "--set", "sweep_stop=2", "--out", (dir / "s.csv").string()}) == 2);

    // Unwritable output exits 3.
    CHECK(run_cli({"figures", "fig3", "--out", "/nonexistent-dir/x.csv"}) == 3);
}

TEST_CASE("cli solve and simulate run in-process") {
    CHECK(run_cli({"solve", "--set", "sinr_db=7", "--set", "stations=5"}) == 0);
    CHECK(run_cli({"simulate", "--set", "stations=3", "--slots", "5000",
                   "--replications", "2"}) == 0);
    // A lone station on a dead channel has no stationary behaviour.
    CHECK(run_cli({"solve", "--set", "stations=1", "--set", "sinr_db=0"}) == 2);
    CHECK(run_cli({"simulate", "--replications", "1"}) == 1);
}

TEST_CASE("simulation columns attach to sweeps and figures") {
    RunConfig cfg;
    apply_override(cfg, "sweep_axis=stations");
    apply_override(cfg, "sweep_start=2");
    apply_override(cfg, "sweep_stop=4");
    apply_override(cfg, "sweep_step=2");
    apply_override(cfg, "slots=2000");
    apply_override(cfg, "replications=2");
    const auto table = run_sweep(cfg, true);
    CHECK(table.columns.back() == "s_sim_se");
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][8] > 0.0);  // tau_sim

    RunConfig quick;
    apply_override(quick, "slots=500");
    apply_override(quick, "replications=2");
    const auto fig3 = figure("fig3", quick, true);
    CHECK(fig3.columns == std::vector<std::string>{"sinr_db", "tau_model", "tau_bianchi",
                                                   "tau_sim"});
}

TEST_CASE("cli gnuplot companion references the csv") {
    const auto dir = temp_dir();
    const auto out = dir / "fig7.csv";
    CHECK(run_cli({"figures", "fig7", "--out", out.string(), "--gnuplot-script"}) == 0);
    const auto script = slurp(fs::path(out.string() + ".gp"));
    CHECK(script.find("fig7.csv") != std::string::npos);
    CHECK(script.find("plot") != std::string::npos);
}

TEST_CASE("help lists every config key with its unit") {
    CoutCapture capture;
    const int code = run_cli({"--help"});
    std::cout.flush();
    CHECK(code == 0);
    const std::string help = capture.buffer.str();
    for (const auto& key : config_keys()) {
        INFO("key ", key.name);
        CHECK(help.find(key.name) != std::string::npos);
        CHECK(help.find("[" + key.unit + "]") != std::string::npos);
    }
    CHECK(help.find("dB") != std::string::npos);
    CHECK(help.find("bytes") != std::string::npos);
    CHECK(help.find("us") != std::string::npos);
}
