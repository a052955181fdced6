#include "dcfcap/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dcfcap/config.hpp"
#include "dcfcap/csv.hpp"
#include "dcfcap/simulator.hpp"
#include "dcfcap/sweep.hpp"
#include "dcfcap/throughput.hpp"

namespace dcfcap {

namespace {

std::string key_table() {
    std::ostringstream out;
    out << "Config keys (config file `key = value` lines, or --set key=value):\n";
    for (const auto& key : config_keys()) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-20s [%s]  %s\n", key.name.c_str(),
                      key.unit.c_str(), key.description.c_str());
        out << line;
    }
    return out.str();
}

void print_solve(const ChainSolution& solution, const ThroughputReport& report,
                 const RunConfig& cfg) {
    std::printf("stations            %d\n", solution.n);
    std::printf("sinr                %.6g dB\n", cfg.sinr_db);
    std::printf("capture threshold   %.6g dB\n", cfg.capture_db);
    std::printf("tau                 %.9g\n", solution.tau);
    std::printf("p_col               %.9g\n", solution.inputs.p_col);
    std::printf("p_e                 %.9g\n", solution.inputs.p_e);
    std::printf("p_cap (chain)       %.9g\n", solution.inputs.p_cap);
    std::printf("p_cap (slot)        %.9g\n", report.p_cap);
    std::printf("p_tr                %.9g\n", report.p_tr);
    std::printf("p_s                 %.9g\n", report.p_s);
    std::printf("T_s/T_c/T_e/sigma   %.6g / %.6g / %.6g / %.6g us\n", report.durations.t_s_us,
                report.durations.t_c_us, report.durations.t_e_us, report.durations.sigma_us);
    std::printf("S                   %.9g\n", report.s);
    std::printf("S                   %.9g Mbps\n", report.s_mbps);
    std::printf("iterations          %d\n", solution.iterations);
    std::printf("residual            %.3g\n", solution.residual);
}

void print_simulate(const ReplicateStats& stats, const RunConfig& cfg) {
    std::printf("replications        %d x %ld slots (seed %llu, %s capture)\n",
                stats.replications, cfg.slots,
                static_cast<unsigned long long>(cfg.seed),
                cfg.capture_mode == CaptureMode::Analytic ? "analytic" : "sampled");
    std::printf("tau                 %.9g (se %.3g)\n", stats.tau_mean, stats.tau_se);
    std::printf("S                   %.9g (se %.3g)\n", stats.s_mean, stats.s_se);
    std::printf("S                   %.9g Mbps (se %.3g)\n", stats.s_mean * cfg.data_rate_mbps,
                stats.s_se * cfg.data_rate_mbps);
}

void write_outputs(const Csv& csv, const std::filesystem::path& out, bool gnuplot) {
    write_csv(csv, out);
    std::printf("wrote %s (%zu rows)\n", out.string().c_str(), csv.rows.size());
    if (gnuplot) {
        const auto script_path = out.string() + ".gp";
        std::ofstream script(script_path, std::ios::binary | std::ios::trunc);
        if (!script) throw IoError("cannot open " + script_path + " for writing");
        script << gnuplot_script(csv, out.filename().string(), out.stem().string());
        if (!script) throw IoError("short write to " + script_path);
        std::printf("wrote %s\n", script_path.c_str());
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"802.11b DCF saturation model: loss-differentiating backoff under "
                 "channel errors and Rayleigh capture"};
    app.footer(key_table());
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> slots;
    std::optional<int> replications;
    bool with_sim = false;
    bool gnuplot = false;

    app.add_option("--config", config_path, "config file of `key = value` lines");
    app.add_option("--set", sets, "override one key (repeatable), e.g. --set sinr_db=7");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--seed", seed, "base RNG seed (overrides the seed key)");
    app.add_option("--slots", slots, "virtual slots per run (overrides the slots key)");
    app.add_option("--replications", replications, "simulation repeats (overrides the key)");
    app.add_flag("--sim", with_sim, "attach simulation columns to sweeps and figures");
    app.add_flag("--gnuplot-script", gnuplot, "also write a companion .gp plot script");

    auto* solve_cmd = app.add_subcommand("solve", "solve the fixed point at one parameter set");
    auto* simulate_cmd = app.add_subcommand("simulate", "run replicated slot simulations");
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep the configured axis, write CSV");
    auto* figures_cmd = app.add_subcommand("figures", "emit a canned figure dataset");
    std::string figure_id;
    figures_cmd->add_option("id", figure_id, "one of fig3, fig4, fig5, fig6, fig7")->required();
    for (auto* sub : {solve_cmd, simulate_cmd, sweep_cmd, figures_cmd}) sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("dcfcap");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        for (const auto& s : sets) apply_override(cfg, s);
        if (seed) cfg.seed = *seed;
        if (slots) {
            if (*slots < 1) throw ConfigError("--slots must be >= 1");
            cfg.slots = *slots;
        }
        if (replications) {
            if (*replications < 2) throw ConfigError("--replications must be >= 2");
            cfg.replications = *replications;
        }

        if (solve_cmd->parsed()) {
            const auto solution = solve_fixed_point(cfg.stations, cfg.mac(), cfg.channel(),
                                                    cfg.backoff(), cfg.solve_options());
            const auto report = saturation_throughput(solution, cfg.mac(), cfg.error_accounting);
            print_solve(solution, report, cfg);
        } else if (simulate_cmd->parsed()) {
            print_simulate(replicate(cfg.sim(), cfg.replications), cfg);
        } else if (sweep_cmd->parsed()) {
            const auto csv = run_sweep(cfg, with_sim);
            write_outputs(csv, out_path.empty() ? "sweep.csv" : out_path, gnuplot);
        } else if (figures_cmd->parsed()) {
            const auto csv = figure(figure_id, cfg, with_sim);
            write_outputs(csv, out_path.empty() ? figure_id + ".csv" : out_path, gnuplot);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const SweepError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        for (const auto& f : e.failures) std::cerr << "  " << f << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver error: " << e.what() << " (last tau " << e.last_tau << ", residual "
                  << e.residual << ", " << e.iterations << " iterations)\n";
        return 2;
    } catch (const DegenerateChainError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace dcfcap
