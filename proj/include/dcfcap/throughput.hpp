#pragma once

#include "dcfcap/dcf_chain.hpp"
#include "dcfcap/mac.hpp"

namespace dcfcap {

/// How channel errors are charged against deliveries.
///  - Differentiated: only single-transmitter deliveries can be corrupted;
///    captured frames count as clean, matching the backoff chain and the
///    simulator. Default.
///  - Lumped: the (1 - P_e) factor multiplies every delivery, captured or
///    not, and error slots are drawn from all of them.
enum class ErrorAccounting { Differentiated, Lumped };

struct ThroughputReport {
    double p_tr = 0.0;
    double p_s = 0.0;
    double p_e = 0.0;
    double p_cap = 0.0;  // slot-level aggregate
    double tau = 0.0;
    SlotDurations durations{};
    double s = 0.0;       // fraction of channel time carrying payload
    double s_mbps = 0.0;  // same quantity as payload bits per microsecond
    ErrorAccounting accounting = ErrorAccounting::Differentiated;
};

/// Probability at least one of n stations transmits: 1 - (1-tau)^n.
double p_transmit(int n, double tau);

/// Probability a busy slot delivers a frame: exactly one transmitter, or a
/// capture. (n tau (1-tau)^(n-1) + p_cap) / (1 - (1-tau)^n). Throws on
/// tau = 0 (0/0); clamps to [0,1] with a stderr note should the numerator
/// ever exceed the denominator.
double p_success(int n, double tau, double p_cap);

/// Saturation throughput from a converged solution: expected payload time
/// per slot over expected slot length, with slot durations weighted by the
/// chosen error accounting. Also reported in Mbps.
ThroughputReport saturation_throughput(const ChainSolution& solution, const MacParams& mac,
                                       ErrorAccounting accounting = ErrorAccounting::Differentiated);

/// Ideal-channel baseline throughput at bianchi_tau(n).
ThroughputReport bianchi_throughput(int n, const MacParams& mac, const BackoffParams& backoff = {});

}  // namespace dcfcap
