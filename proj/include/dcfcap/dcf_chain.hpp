#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dcfcap/capture.hpp"
#include "dcfcap/mac.hpp"
#include "dcfcap/phy_error.hpp"

namespace dcfcap {

/// Binary-exponential-backoff schedule: W_i = 2^i * w0 up to stage
/// max_stage, constant beyond it.
struct BackoffParams {
    int w0 = 32;
    int max_stage = 5;
};

int contention_window(int stage, const BackoffParams& params);

/// Per-attempt outcome probabilities driving the backoff chain. p_cap is
/// conditioned on a collision having happened.
struct ChainInputs {
    double p_col = 0.0;
    double p_e = 0.0;
    double p_cap = 0.0;
};

/// The chain has no stationary distribution: a retry loop absorbs all
/// probability mass (error-holding with certainty, or stage m with zero
/// success probability).
class DegenerateChainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-point iteration ran out of its budget.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double last_tau, double residual, int iterations)
        : std::runtime_error(what), last_tau(last_tau), residual(residual), iterations(iterations) {}
    double last_tau;
    double residual;
    int iterations;
};

/// Stage-head probabilities b_{i,0}, i = 0..max_stage, normalised so the
/// full (stage, counter) distribution sums to one.
///
/// With q = p_col(1-p_cap) / (1 - (1-p_col) p_e):
///   b_{i,0} = q^i b_{0,0}                          for i < m,
///   b_{m,0} = q^(m-1) b_{0,0} p_col(1-p_cap) / s   with s the per-attempt
/// success probability, and b_{0,0} fixed by sum_i b_{i,0} (W_i+1)/2 = 1.
std::vector<double> stationary_head(const ChainInputs& inputs, const BackoffParams& params);

/// Expands stage heads to the full per-state distribution,
/// b_{i,k} = ((W_i - k)/W_i) * b_{i,0}, ordered stage-major.
std::vector<double> expand_stationary(const std::vector<double>& head, const BackoffParams& params);

/// Dense row-stochastic matrix over the (stage, counter) state space.
/// Intended for small chains; the oracle tests drive it.
struct StochasticMatrix {
    std::size_t size = 0;
    std::vector<double> a;  // row-major

    double& at(std::size_t row, std::size_t col) { return a[row * size + col]; }
    double at(std::size_t row, std::size_t col) const { return a[row * size + col]; }
};

/// Index of state (stage, counter) in the flat ordering used by
/// transition_matrix and expand_stationary.
std::size_t chain_state_index(int stage, int counter, const BackoffParams& params);

std::size_t chain_state_count(const BackoffParams& params);

/// Explicit one-step transition matrix of the backoff chain. Every row
/// sums to one for any probability inputs.
StochasticMatrix transition_matrix(const ChainInputs& inputs, const BackoffParams& params);

/// Stationary distribution via iterated powers (repeated squaring of the
/// matrix until its rows agree). Independent of the closed form above.
std::vector<double> stationary_by_power_iteration(const StochasticMatrix& matrix,
                                                  double tol = 1e-14, int max_squarings = 60);

struct BianchiResult {
    double tau;
    double p;
};

/// Ideal-channel baseline (no errors, no capture): solves the classic
/// two-equation system tau(p), p = 1-(1-tau)^(n-1) by bisection on p.
/// tau(p) uses the geometric-sum form, which stays finite at p = 1/2.
BianchiResult bianchi_tau(int n, const BackoffParams& params = {});

/// Receiver-side channel description: linear SINR plus the rate models it
/// feeds and the capture configuration.
struct ChannelParams {
    double sinr = 10.0;  // linear, not dB
    RateModel data_model = RateModel::make(Rate::Mbps11);
    RateModel basic_model = RateModel::make(Rate::Mbps1);
    CaptureParams capture;
};

struct SolveOptions {
    CaptureSemantics capture_semantics = CaptureSemantics::Matched;
    double tolerance = 1e-12;
    int max_iterations = 10000;
    double damping = 0.5;
};

/// Converged coupling of the chain with the collision/capture/error
/// feedback. inputs holds the per-attempt probabilities at tau*; p_cap_slot
/// is the slot-level aggregate capture probability the throughput formula
/// consumes (distinct from the per-station inputs.p_cap).
struct ChainSolution {
    std::vector<double> head;
    double tau = 0.0;
    ChainInputs inputs;
    double p_cap_slot = 0.0;
    int n = 1;
    int iterations = 0;
    double residual = 0.0;
};

/// Solves tau = tau_chain(P_col(tau), P_e, P_cap(tau)) with
/// P_col = 1-(1-tau)^(n-1) and P_e fixed by the SINR. Damped iteration
/// with a bisection fallback when the residual keeps alternating sign.
ChainSolution solve_fixed_point(int n, const MacParams& mac, const ChannelParams& channel,
                                const BackoffParams& backoff = {},
                                const SolveOptions& options = {});

}  // namespace dcfcap
