#pragma once

#include <optional>
#include <span>

namespace dcfcap {

/// Optional deterministic path-loss geometry; when set, the local mean
/// power is A * r^(-x) * p_t instead of the homogeneous default.
struct PathGeometry {
    double attenuation_a = 1.0;
    double distance = 1.0;
    double tx_power = 1.0;
};

/// Rayleigh-fading capture parameters. z0 is the linear capture ratio;
/// the DSSS correlation receiver scales interference by g = 2/(3*Sf).
struct CaptureParams {
    double z0 = 3.9810717055349725;  // 6 dB
    int spreading_factor = 11;
    double path_loss_exponent = 4.0;
    double mean_power = 1.0;
    std::optional<PathGeometry> geometry;

    /// Mean received power, from geometry when present.
    double local_mean_power() const;
};

/// DSSS processing gain g(Sf) = 2 / (3 * Sf).
double processing_gain(int spreading_factor);

/// Probability that a detected frame survives `interferers` equal-mean
/// Rayleigh interferers: (1 + z0 * g)^(-interferers).
double conditional_capture(double z0, int spreading_factor, int interferers);

/// Probability R_i that i frames interfere with a detected one in a slot
/// where n stations each transmit with probability tau:
/// C(n, i+1) * tau^(i+1) * (1-tau)^(n-i-1), for i in [0, n-1].
double interferer_weight(int n, double tau, int i);

/// Slot-level capture probability: sum over i >= 1 of
/// R_i * conditional_capture(z0, Sf, i). Zero for a single station.
double capture_prob(const CaptureParams& params, int n, double tau);

/// How the per-station capture probability entering the backoff chain is
/// derived from the slot-level model:
///  - Matched: the receiver locks onto one of the i+1 overlapping frames
///    uniformly, so a given colliding transmitter escapes escalation with
///    probability (1+z0*g)^(-i) / (i+1); consistent with the simulator.
///  - Aggregate: the slot-level capture_prob fed in unchanged.
///  - Conditional: the tagged transmitter is always the detected frame
///    (no 1/(i+1) share); upper bound kept for sensitivity runs.
enum class CaptureSemantics { Matched, Aggregate, Conditional };

/// Per-station capture probability under the chosen semantics, conditioned
/// on the tagged station transmitting and colliding (except Aggregate,
/// which is unconditioned by construction).
double chain_capture_prob(const CaptureParams& params, int n, double tau,
                          CaptureSemantics semantics);

/// Receiver-side capture test over one collision. powers[0] is the frame
/// the receiver locked onto (the caller picks it; the simulator randomises
/// the choice uniformly). Returns 0 when powers[0] exceeds z0 * g times the
/// summed interference, nullopt otherwise. Requires at least two powers.
std::optional<std::size_t> sample_capture(std::span<const double> powers, double z0,
                                          int spreading_factor);

}  // namespace dcfcap
