#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcfcap/dcf_chain.hpp"
#include "dcfcap/mac.hpp"

namespace dcfcap {

/// How collisions are resolved in the simulator.
///  - Analytic: the slot outcome is a Bernoulli draw on
///    conditional_capture(z0, Sf, i) with a uniformly chosen winner.
///  - Sampled: per-transmitter exponential powers fed to sample_capture,
///    with the detected frame chosen uniformly. Distributionally identical
///    to Analytic for equal mean powers.
enum class CaptureMode { Analytic, Sampled };

struct SimConfig {
    int n = 10;
    MacParams mac;
    ChannelParams channel;
    BackoffParams backoff;
    long slots = 1'000'000;  // virtual backoff slots
    std::uint64_t seed = 1;
    CaptureMode capture_mode = CaptureMode::Analytic;
    /// Sensitivity knob: captured frames additionally face the frame error
    /// probability (they normally do not).
    bool capture_then_error = false;
};

struct StationTally {
    long attempts = 0;
    long successes = 0;        // single-transmitter error-free deliveries
    long captures = 0;         // deliveries won in a collision
    long error_losses = 0;     // NAK received, stage held
    long collision_losses = 0; // escalations
};

struct SimStats {
    long slots = 0;
    long idle_slots = 0;
    long success_slots = 0;
    long capture_slots = 0;
    long error_slots = 0;
    long collision_slots = 0;
    long attempts = 0;
    double total_time_us = 0.0;
    double delivered_payload_us = 0.0;
    double empirical_tau = 0.0;  // attempts / (n * slots)
    double empirical_s = 0.0;    // delivered payload time / total time
    std::uint64_t seed = 0;
    std::string rng = "mt19937_64";
    std::vector<StationTally> stations;
};

/// Slot-synchronous simulation of n saturated stations under the
/// loss-differentiating backoff: errors hold the stage (NAK), captures
/// reset the winner, uncaptured collisions escalate. Deterministic for a
/// fixed config.
SimStats run(const SimConfig& config);

struct ReplicateStats {
    int replications = 0;
    double tau_mean = 0.0;
    double tau_se = 0.0;
    double s_mean = 0.0;
    double s_se = 0.0;
};

/// Mean and standard error over independent runs seeded seed, seed+1, ...
/// Requires at least two replications.
ReplicateStats replicate(const SimConfig& config, int replications);

}  // namespace dcfcap
