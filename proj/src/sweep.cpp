#include "dcfcap/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "dcfcap/simulator.hpp"
#include "dcfcap/throughput.hpp"

namespace dcfcap {

namespace {

struct PointResult {
    double tau = 0.0;
    double s = 0.0;
    double s_mbps = 0.0;
    double p_e = 0.0;
    double p_cap = 0.0;
    double sim_tau = 0.0, sim_tau_se = 0.0;
    double sim_s = 0.0, sim_s_se = 0.0;
    std::string error;
};

PointResult evaluate(const RunConfig& cfg, bool with_sim) {
    PointResult r;
    const auto solution = solve_fixed_point(cfg.stations, cfg.mac(), cfg.channel(),
                                            cfg.backoff(), cfg.solve_options());
    const auto report = saturation_throughput(solution, cfg.mac(), cfg.error_accounting);
    r.tau = solution.tau;
    r.s = report.s;
    r.s_mbps = report.s_mbps;
    r.p_e = report.p_e;
    r.p_cap = report.p_cap;
    if (with_sim) {
        const auto stats = replicate(cfg.sim(), cfg.replications);
        r.sim_tau = stats.tau_mean;
        r.sim_tau_se = stats.tau_se;
        r.sim_s = stats.s_mean;
        r.sim_s_se = stats.s_se;
    }
    return r;
}

void run_pool(std::size_t count, const std::function<void(std::size_t)>& work) {
    const unsigned workers =
        std::max(1u, std::min({std::thread::hardware_concurrency(), 8u, unsigned(count)}));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                work(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<PointResult> evaluate_grid(const std::vector<RunConfig>& points,
                                       const std::vector<std::string>& labels, bool with_sim) {
    std::vector<PointResult> results(points.size());
    run_pool(points.size(), [&](std::size_t i) {
        try {
            results[i] = evaluate(points[i], with_sim);
        } catch (const std::exception& e) {
            results[i].error = labels[i] + ": " + e.what();
        }
    });
    std::vector<std::string> failures;
    for (const auto& r : results)
        if (!r.error.empty()) failures.push_back(r.error);
    if (!failures.empty())
        throw SweepError(std::to_string(failures.size()) + " grid point(s) failed",
                         std::move(failures));
    return results;
}

std::vector<double> grid_values(double start, double stop, double step) {
    if (!(step > 0.0)) throw ConfigError("key 'sweep_step': must be positive");
    if (stop < start) throw ConfigError("sweep_stop must not precede sweep_start");
    std::vector<double> values;
    // Index-based stepping keeps the grid exact for integral steps.
    const long count = long(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) values.push_back(start + double(i) * step);
    return values;
}

void set_axis(RunConfig& cfg, SweepAxis axis, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    switch (axis) {
        case SweepAxis::SinrDb: set_key(cfg, "sinr_db", buf); break;
        case SweepAxis::CaptureDb: set_key(cfg, "capture_db", buf); break;
        case SweepAxis::Stations: set_key(cfg, "stations", buf); break;
        case SweepAxis::PayloadBytes: set_key(cfg, "payload_bytes", buf); break;
    }
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SinrDb: return "sinr_db";
        case SweepAxis::CaptureDb: return "capture_db";
        case SweepAxis::Stations: return "stations";
        case SweepAxis::PayloadBytes: return "payload_bytes";
    }
    return "?";
}

std::string label(const std::string& prefix, const char* axis, double value) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%s point %s=%g", prefix.c_str(), axis, value);
    return buf;
}

}  // namespace

Csv run_sweep(const RunConfig& base, bool with_sim) {
    if (!base.sweep_axis) throw ConfigError("sweep mode needs sweep_axis");
    const SweepAxis axis = *base.sweep_axis;
    const auto values = grid_values(base.sweep_start, base.sweep_stop, base.sweep_step);

    std::vector<RunConfig> points;
    std::vector<std::string> labels;
    for (double v : values) {
        RunConfig cfg = base;
        set_axis(cfg, axis, v);
        points.push_back(cfg);
        labels.push_back(label("sweep", axis_name(axis), v));
    }
    const auto results = evaluate_grid(points, labels, with_sim);

    Csv csv;
    csv.columns = {axis_name(axis), "tau_model", "s_model", "s_mbps_model",
                   "p_e", "p_cap", "tau_bianchi", "s_bianchi"};
    if (with_sim)
        csv.columns.insert(csv.columns.end(),
                           {"tau_sim", "tau_sim_se", "s_sim", "s_sim_se"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& r = results[i];
        const auto& cfg = points[i];
        const auto baseline = bianchi_throughput(cfg.stations, cfg.mac(), cfg.backoff());
        std::vector<double> row = {values[i], r.tau, r.s, r.s_mbps,
                                   r.p_e, r.p_cap, baseline.tau, baseline.s};
        if (with_sim) {
            row.insert(row.end(), {r.sim_tau, r.sim_tau_se, r.sim_s, r.sim_s_se});
        }
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig3", "fig4", "fig5", "fig6", "fig7"};
    return ids;
}

namespace {

struct Curve {
    std::string column;
    std::function<void(RunConfig&)> tweak;
};

// Shared machinery for the canned figures: axis values x curves, model
// columns first, an optional baseline, then simulation siblings.
Csv figure_grid(const RunConfig& base, const std::string& id, SweepAxis axis,
                const std::vector<double>& values, const std::vector<Curve>& curves,
                bool tau_metric, bool with_baseline, bool with_sim) {
    std::vector<RunConfig> points;
    std::vector<std::string> labels;
    for (double v : values) {
        for (const auto& curve : curves) {
            RunConfig cfg = base;
            set_axis(cfg, axis, v);
            curve.tweak(cfg);
            points.push_back(cfg);
            labels.push_back(label(id + " " + curve.column, axis_name(axis), v));
        }
    }
    const auto results = evaluate_grid(points, labels, with_sim);

    Csv csv;
    csv.columns.push_back(axis_name(axis));
    for (const auto& curve : curves)
        csv.columns.push_back((tau_metric ? "tau_" : "s_") + curve.column);
    if (with_baseline) csv.columns.push_back(tau_metric ? "tau_bianchi" : "s_bianchi");
    if (with_sim) {
        for (const auto& curve : curves) {
            if (curves.size() == 1)
                csv.columns.push_back(tau_metric ? "tau_sim" : "s_sim");
            else
                csv.columns.push_back((tau_metric ? "tau_sim_" : "s_sim_") + curve.column);
        }
    }

    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        std::vector<double> row = {values[vi]};
        for (std::size_t ci = 0; ci < curves.size(); ++ci) {
            const auto& r = results[vi * curves.size() + ci];
            row.push_back(tau_metric ? r.tau : r.s);
        }
        if (with_baseline) {
            RunConfig cfg = points[vi * curves.size()];
            if (tau_metric) {
                row.push_back(bianchi_tau(cfg.stations, cfg.backoff()).tau);
            } else {
                row.push_back(bianchi_throughput(cfg.stations, cfg.mac(), cfg.backoff()).s);
            }
        }
        if (with_sim) {
            for (std::size_t ci = 0; ci < curves.size(); ++ci) {
                const auto& r = results[vi * curves.size() + ci];
                row.push_back(tau_metric ? r.sim_tau : r.sim_s);
            }
        }
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

std::vector<double> sinr_grid() { return grid_values(0.0, 30.0, 1.0); }

}  // namespace

Csv figure(const std::string& id, const RunConfig& base, bool with_sim) {
    RunConfig cfg = base;
    if (id == "fig3") {
        // tau vs SINR; 10 stations, 6 dB capture threshold, 1024-byte payload
        cfg.stations = 10;
        cfg.capture_db = 6.0;
        cfg.payload_bytes = 1024;
        return figure_grid(cfg, id, SweepAxis::SinrDb, sinr_grid(), {{"model", [](RunConfig&) {}}},
                           /*tau_metric=*/true, /*with_baseline=*/true, with_sim);
    }
    if (id == "fig4") {
        // S vs station count; 6 dB capture threshold, 7 dB SINR
        cfg.capture_db = 6.0;
        cfg.sinr_db = 7.0;
        cfg.payload_bytes = 1024;
        return figure_grid(cfg, id, SweepAxis::Stations, grid_values(2.0, 50.0, 2.0),
                           {{"model", [](RunConfig&) {}}},
                           /*tau_metric=*/false, /*with_baseline=*/true, with_sim);
    }
    if (id == "fig5") {
        // S vs SINR for capture thresholds 1, 10, 30 dB; 5 stations
        cfg.stations = 5;
        cfg.payload_bytes = 1024;
        std::vector<Curve> curves;
        for (double z : {1.0, 10.0, 30.0}) {
            char col[24];
            std::snprintf(col, sizeof col, "z0_%gdb", z);
            curves.push_back({col, [z](RunConfig& c) { c.capture_db = z; }});
        }
        return figure_grid(cfg, id, SweepAxis::SinrDb, sinr_grid(), curves,
                           /*tau_metric=*/false, /*with_baseline=*/true, with_sim);
    }
    if (id == "fig6") {
        // S vs SINR for payloads 1024/128 bytes x capture thresholds 6/30 dB; 5 stations
        cfg.stations = 5;
        std::vector<Curve> curves;
        for (int payload : {1024, 128}) {
            for (double z : {6.0, 30.0}) {
                char col[32];
                std::snprintf(col, sizeof col, "p%db_z0_%gdb", payload, z);
                curves.push_back({col, [payload, z](RunConfig& c) {
                                      c.payload_bytes = payload;
                                      c.capture_db = z;
                                  }});
            }
        }
        return figure_grid(cfg, id, SweepAxis::SinrDb, sinr_grid(), curves,
                           /*tau_metric=*/false, /*with_baseline=*/false, with_sim);
    }
    if (id == "fig7") {
        // S vs SINR for capture thresholds 6/24 dB; 2 stations
        cfg.stations = 2;
        cfg.payload_bytes = 1024;
        std::vector<Curve> curves;
        for (double z : {6.0, 24.0}) {
            char col[24];
            std::snprintf(col, sizeof col, "z0_%gdb", z);
            curves.push_back({col, [z](RunConfig& c) { c.capture_db = z; }});
        }
        return figure_grid(cfg, id, SweepAxis::SinrDb, sinr_grid(), curves,
                           /*tau_metric=*/false, /*with_baseline=*/false, with_sim);
    }
    throw ConfigError("unknown figure '" + id + "' (expected fig3..fig7)");
}

}  // namespace dcfcap
