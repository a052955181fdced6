#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcfcap/dcf_chain.hpp"
#include "dcfcap/simulator.hpp"
#include "dcfcap/throughput.hpp"

namespace dcfcap {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SweepAxis { SinrDb, Stations, CaptureDb, PayloadBytes };

/// Flat run description assembled from defaults, a config file and command
/// line overrides, in that order. dB values stay in dB here and convert to
/// linear exactly once, inside the builders.
struct RunConfig {
    // contention
    int stations = 10;
    int w0 = 32;
    int m = 5;
    // channel
    double sinr_db = 10.0;
    double capture_db = 6.0;
    int spreading_factor = 11;
    double path_loss_exponent = 4.0;
    double mean_power = 1.0;
    double data_rate_mbps = 11.0;
    double basic_rate_mbps = 1.0;
    // frames
    int payload_bytes = 1024;
    int mac_header_bytes = 24;
    int phy_header_bytes = 16;
    int ack_bytes = 14;
    int nak_bytes = 14;
    // timing (microseconds)
    double slot_us = 20.0;
    double sifs_us = 10.0;
    double difs_us = 50.0;
    double ack_timeout_us = 300.0;
    double prop_delay_us = 1.0;
    // simulation
    long slots = 1'000'000;
    std::uint64_t seed = 1;
    int replications = 5;
    CaptureMode capture_mode = CaptureMode::Analytic;
    bool capture_then_error = false;
    // model semantics
    CaptureSemantics capture_semantics = CaptureSemantics::Matched;
    ErrorAccounting error_accounting = ErrorAccounting::Differentiated;
    SerFormula ser_formula = SerFormula::Corrected;
    bool strict_timing_extended = false;
    // sweep grid
    std::optional<SweepAxis> sweep_axis;
    double sweep_start = 0.0;
    double sweep_stop = 30.0;
    double sweep_step = 1.0;

    MacParams mac() const;
    ChannelParams channel() const;
    BackoffParams backoff() const;
    SolveOptions solve_options() const;
    SimConfig sim() const;
};

struct KeyInfo {
    std::string name;
    std::string unit;
    std::string description;
};

/// Every recognised config key with its unit, for --help and the docs.
const std::vector<KeyInfo>& config_keys();

/// Applies one key/value pair; unknown keys and out-of-range values throw
/// ConfigError naming the key.
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines with '#' comments. Errors carry
/// filename:line.
void apply_config_file(RunConfig& config, std::istream& in, const std::string& filename);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses a --set token of the form key=value.
void apply_override(RunConfig& config, const std::string& assignment);

}  // namespace dcfcap
