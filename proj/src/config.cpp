#include "dcfcap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dcfcap {

namespace {

double to_linear_db(double db) { return std::pow(10.0, db / 10.0); }

double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size() || !std::isfinite(x))
        throw ConfigError("key '" + key + "': '" + value + "' is not a finite number");
    return x;
}

long parse_integer(const std::string& key, const std::string& value, long lo, long hi) {
    const double x = parse_number(key, value);
    if (x != std::floor(x)) throw ConfigError("key '" + key + "': expected an integer");
    if (x < double(lo) || x > double(hi))
        throw ConfigError("key '" + key + "': value " + value + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return long(x);
}

double parse_real(const std::string& key, const std::string& value, double lo, double hi) {
    const double x = parse_number(key, value);
    if (x < lo || x > hi)
        throw ConfigError("key '" + key + "': value " + value + " out of range");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(value, &used);
        if (used != value.size()) throw ConfigError("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    }
}

bool parse_switch(const std::string& key, const std::string& value) {
    if (value == "on") return true;
    if (value == "off") return false;
    throw ConfigError("key '" + key + "': expected on|off, got '" + value + "'");
}

struct Handler {
    KeyInfo info;
    std::function<void(RunConfig&, const std::string&)> apply;
};

const std::vector<Handler>& handlers() {
    static const std::vector<Handler> table = [] {
        std::vector<Handler> h;
        auto add = [&](std::string name, std::string unit, std::string desc,
                       std::function<void(RunConfig&, const std::string&)> fn) {
            h.push_back({{std::move(name), std::move(unit), std::move(desc)}, std::move(fn)});
        };
        add("stations", "count", "contending saturated stations", [](RunConfig& c, const std::string& v) {
            c.stations = int(parse_integer("stations", v, 1, 500));
        });
        add("w0", "slots", "minimum contention window", [](RunConfig& c, const std::string& v) {
            c.w0 = int(parse_integer("w0", v, 2, 65536));
        });
        add("m", "stages", "maximum backoff stage", [](RunConfig& c, const std::string& v) {
            c.m = int(parse_integer("m", v, 0, 20));
        });
        add("sinr_db", "dB", "signal to noise-plus-interference ratio", [](RunConfig& c, const std::string& v) {
            c.sinr_db = parse_real("sinr_db", v, -100.0, 400.0);
        });
        add("capture_db", "dB", "capture ratio z0", [](RunConfig& c, const std::string& v) {
            c.capture_db = parse_real("capture_db", v, -100.0, 400.0);
        });
        add("spreading_factor", "chips", "DSSS spreading factor", [](RunConfig& c, const std::string& v) {
            c.spreading_factor = int(parse_integer("spreading_factor", v, 1, 1024));
        });
        add("path_loss_exponent", "unitless", "deterministic path loss exponent", [](RunConfig& c, const std::string& v) {
            c.path_loss_exponent = parse_real("path_loss_exponent", v, 0.1, 10.0);
        });
        add("mean_power", "mW", "homogeneous local mean received power", [](RunConfig& c, const std::string& v) {
            c.mean_power = parse_real("mean_power", v, 1e-12, 1e12);
        });
        add("data_rate_mbps", "Mbps", "payload rate: 1, 2, 5.5 or 11", [](RunConfig& c, const std::string& v) {
            const double x = parse_number("data_rate_mbps", v);
            if (x != 1.0 && x != 2.0 && x != 5.5 && x != 11.0)
                throw ConfigError("key 'data_rate_mbps': must be 1, 2, 5.5 or 11");
            c.data_rate_mbps = x;
        });
        add("basic_rate_mbps", "Mbps", "control/header rate: 1 or 2", [](RunConfig& c, const std::string& v) {
            const double x = parse_number("basic_rate_mbps", v);
            if (x != 1.0 && x != 2.0)
                throw ConfigError("key 'basic_rate_mbps': must be 1 or 2");
            c.basic_rate_mbps = x;
        });
        add("payload_bytes", "bytes", "MAC body payload size", [](RunConfig& c, const std::string& v) {
            c.payload_bytes = int(parse_integer("payload_bytes", v, 0, 65536));
        });
        add("mac_header_bytes", "bytes", "MAC header size", [](RunConfig& c, const std::string& v) {
            c.mac_header_bytes = int(parse_integer("mac_header_bytes", v, 0, 4096));
        });
        add("phy_header_bytes", "bytes", "PHY header size (sent at basic rate)", [](RunConfig& c, const std::string& v) {
            c.phy_header_bytes = int(parse_integer("phy_header_bytes", v, 0, 4096));
        });
        add("ack_bytes", "bytes", "ACK frame body size", [](RunConfig& c, const std::string& v) {
            c.ack_bytes = int(parse_integer("ack_bytes", v, 0, 4096));
        });
        add("nak_bytes", "bytes", "NAK frame body size (must equal ack_bytes)", [](RunConfig& c, const std::string& v) {
            c.nak_bytes = int(parse_integer("nak_bytes", v, 0, 4096));
        });
        add("slot_us", "us", "empty slot duration", [](RunConfig& c, const std::string& v) {
            c.slot_us = parse_real("slot_us", v, 1e-6, 1e6);
        });
        add("sifs_us", "us", "short interframe space", [](RunConfig& c, const std::string& v) {
            c.sifs_us = parse_real("sifs_us", v, 0.0, 1e6);
        });
        add("difs_us", "us", "distributed interframe space", [](RunConfig& c, const std::string& v) {
            c.difs_us = parse_real("difs_us", v, 0.0, 1e6);
        });
        add("ack_timeout_us", "us", "ACK timeout charged to collisions", [](RunConfig& c, const std::string& v) {
            c.ack_timeout_us = parse_real("ack_timeout_us", v, 0.0, 1e6);
        });
        add("prop_delay_us", "us", "one-way propagation delay", [](RunConfig& c, const std::string& v) {
            c.prop_delay_us = parse_real("prop_delay_us", v, 0.0, 1e6);
        });
        add("slots", "count", "virtual backoff slots per simulation run", [](RunConfig& c, const std::string& v) {
            c.slots = parse_integer("slots", v, 1, 2'000'000'000L);
        });
        add("seed", "integer", "base RNG seed", [](RunConfig& c, const std::string& v) {
            c.seed = parse_u64("seed", v);
        });
        add("replications", "count", "independent simulation repeats (>= 2)", [](RunConfig& c, const std::string& v) {
            c.replications = int(parse_integer("replications", v, 2, 10000));
        });
        add("capture_mode", "analytic|sampled", "collision resolution draw", [](RunConfig& c, const std::string& v) {
            if (v == "analytic") c.capture_mode = CaptureMode::Analytic;
            else if (v == "sampled") c.capture_mode = CaptureMode::Sampled;
            else throw ConfigError("key 'capture_mode': expected analytic|sampled");
        });
        add("capture_semantics", "matched|aggregate|conditional",
            "per-station capture probability fed to the backoff chain", [](RunConfig& c, const std::string& v) {
            if (v == "matched") c.capture_semantics = CaptureSemantics::Matched;
            else if (v == "aggregate") c.capture_semantics = CaptureSemantics::Aggregate;
            else if (v == "conditional") c.capture_semantics = CaptureSemantics::Conditional;
            else throw ConfigError("key 'capture_semantics': expected matched|aggregate|conditional");
        });
        add("error_accounting", "differentiated|lumped",
            "whether captured frames are charged the frame error rate", [](RunConfig& c, const std::string& v) {
            if (v == "differentiated") c.error_accounting = ErrorAccounting::Differentiated;
            else if (v == "lumped") c.error_accounting = ErrorAccounting::Lumped;
            else throw ConfigError("key 'error_accounting': expected differentiated|lumped");
        });
        add("ser_formula", "corrected|literal", "final 11 Mbps CCK term: 16*SINR or 4*SINR", [](RunConfig& c, const std::string& v) {
            if (v == "corrected") c.ser_formula = SerFormula::Corrected;
            else if (v == "literal") c.ser_formula = SerFormula::Literal;
            else throw ConfigError("key 'ser_formula': expected corrected|literal");
        });
        add("strict_timing", "off|extended", "add SIFS+DIFS to the error slot", [](RunConfig& c, const std::string& v) {
            if (v == "off") c.strict_timing_extended = false;
            else if (v == "extended") c.strict_timing_extended = true;
            else throw ConfigError("key 'strict_timing': expected off|extended");
        });
        add("capture_then_error", "off|on", "captured frames also face the frame error rate", [](RunConfig& c, const std::string& v) {
            c.capture_then_error = parse_switch("capture_then_error", v);
        });
        add("sweep_axis", "sinr_db|stations|capture_db|payload_bytes", "sweep variable", [](RunConfig& c, const std::string& v) {
            if (v == "sinr_db") c.sweep_axis = SweepAxis::SinrDb;
            else if (v == "stations") c.sweep_axis = SweepAxis::Stations;
            else if (v == "capture_db") c.sweep_axis = SweepAxis::CaptureDb;
            else if (v == "payload_bytes") c.sweep_axis = SweepAxis::PayloadBytes;
            else throw ConfigError("key 'sweep_axis': expected sinr_db|stations|capture_db|payload_bytes");
        });
        add("sweep_start", "axis units", "first sweep point", [](RunConfig& c, const std::string& v) {
            c.sweep_start = parse_number("sweep_start", v);
        });
        add("sweep_stop", "axis units", "last sweep point (inclusive)", [](RunConfig& c, const std::string& v) {
            c.sweep_stop = parse_number("sweep_stop", v);
        });
        add("sweep_step", "axis units", "grid spacing (> 0)", [](RunConfig& c, const std::string& v) {
            c.sweep_step = parse_real("sweep_step", v, 1e-12, 1e12);
        });
        return h;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = [] {
        std::vector<KeyInfo> out;
        for (const auto& h : handlers()) out.push_back(h.info);
        return out;
    }();
    return keys;
}

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& h : handlers()) {
        if (h.info.name == key) {
            h.apply(config, value);
            return;
        }
    }
    throw ConfigError("unknown key '" + key + "'");
}

void apply_config_file(RunConfig& config, std::istream& in, const std::string& filename) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(filename + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(filename + ":" + std::to_string(lineno) + ": empty key or value");
        try {
            set_key(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(filename + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot read config file " + path.string());
    apply_config_file(config, file, path.filename().string());
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty())
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    set_key(config, key, value);
}

MacParams RunConfig::mac() const {
    MacParams p;
    p.mac_header_bytes = mac_header_bytes;
    p.phy_header_bytes = phy_header_bytes;
    p.payload_bytes = payload_bytes;
    p.ack_bytes = ack_bytes;
    p.nak_bytes = nak_bytes;
    p.basic_rate_mbps = basic_rate_mbps;
    p.data_rate_mbps = data_rate_mbps;
    p.slot_us = slot_us;
    p.sifs_us = sifs_us;
    p.difs_us = difs_us;
    p.ack_timeout_us = ack_timeout_us;
    p.prop_delay_us = prop_delay_us;
    p.extended_error_slot = strict_timing_extended;
    if (nak_bytes != ack_bytes)
        throw ConfigError("key 'nak_bytes': must equal ack_bytes");
    return p;
}

ChannelParams RunConfig::channel() const {
    ChannelParams ch;
    ch.sinr = to_linear_db(sinr_db);
    ch.data_model = RateModel::from_mbps(data_rate_mbps, ser_formula);
    ch.basic_model = RateModel::from_mbps(basic_rate_mbps, ser_formula);
    ch.capture.z0 = to_linear_db(capture_db);
    ch.capture.spreading_factor = spreading_factor;
    ch.capture.path_loss_exponent = path_loss_exponent;
    ch.capture.mean_power = mean_power;
    return ch;
}

BackoffParams RunConfig::backoff() const { return {w0, m}; }

SolveOptions RunConfig::solve_options() const {
    SolveOptions o;
    o.capture_semantics = capture_semantics;
    return o;
}

SimConfig RunConfig::sim() const {
    SimConfig s;
    s.n = stations;
    s.mac = mac();
    s.channel = channel();
    s.backoff = backoff();
    s.slots = slots;
    s.seed = seed;
    s.capture_mode = capture_mode;
    s.capture_then_error = capture_then_error;
    return s;
}

}  // namespace dcfcap
