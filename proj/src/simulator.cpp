#include "dcfcap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dcfcap/capture.hpp"
#include "dcfcap/phy_error.hpp"

namespace dcfcap {

namespace {

// All randomness flows through fixed 64-bit mappings so a (seed, config)
// pair reproduces bit-identically.
class SlotRng {
  public:
    explicit SlotRng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {  // (0, 1], 53-bit
        return double((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    std::uint32_t below(std::uint32_t bound) {
        return std::uint32_t((unsigned __int128)eng_() * bound >> 64);
    }

    bool bernoulli(double p) { return uniform01() <= p; }

    double exponential(double mean) { return -mean * std::log(uniform01()); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace

SimStats run(const SimConfig& config) {
    if (config.n < 1) throw std::invalid_argument("station count must be >= 1");
    if (config.slots < 1) throw std::invalid_argument("slot count must be >= 1");
    const int n = config.n;
    const int top = config.backoff.max_stage;

    const double p_e = frame_error_prob(config.mac.layout(), config.channel.data_model,
                                        config.channel.basic_model, config.channel.sinr);
    const auto durations = slot_durations(config.mac);
    const double epl_us = config.mac.payload_time_us();
    const double z0 = config.channel.capture.z0;
    const int sf = config.channel.capture.spreading_factor;
    const double p0 = config.channel.capture.local_mean_power();

    std::vector<int> window(top + 1);
    for (int i = 0; i <= top; ++i) window[i] = contention_window(i, config.backoff);

    SlotRng rng(config.seed);
    std::vector<int> stage(n, 0);
    std::vector<int> counter(n);
    for (int s = 0; s < n; ++s) counter[s] = int(rng.below(window[0]));

    SimStats stats;
    stats.slots = config.slots;
    stats.seed = config.seed;
    stats.stations.resize(n);

    const auto redraw = [&](int s) {
        counter[s] = int(rng.below(window[stage[s]]));
        if (counter[s] < 0 || counter[s] >= window[stage[s]])
            throw std::logic_error("backoff counter drawn outside [0, W_i)");
    };

    std::vector<int> tx;
    std::vector<double> powers;
    tx.reserve(n);
    powers.reserve(n);

    for (long slot = 0; slot < config.slots; ++slot) {
        tx.clear();
        for (int s = 0; s < n; ++s) {
            if (counter[s] == 0)
                tx.push_back(s);
            else
                --counter[s];
        }

        if (tx.empty()) {
            ++stats.idle_slots;
            stats.total_time_us += durations.sigma_us;
            continue;
        }
        stats.attempts += long(tx.size());
        for (int s : tx) ++stats.stations[s].attempts;

        if (tx.size() == 1) {
            const int s = tx[0];
            if (rng.bernoulli(p_e)) {
                ++stats.error_slots;
                ++stats.stations[s].error_losses;
                stats.total_time_us += durations.t_e_us;
                redraw(s);  // NAK: same stage, fresh counter
            } else {
                ++stats.success_slots;
                ++stats.stations[s].successes;
                stats.total_time_us += durations.t_s_us;
                stats.delivered_payload_us += epl_us;
                stage[s] = 0;
                redraw(s);
            }
            continue;
        }

        // Collision. The receiver locks onto one frame uniformly; capture
        // succeeds with probability (1 + z0 g)^(-i) over i interferers.
        const int k = int(tx.size());
        int winner = -1;
        if (config.capture_mode == CaptureMode::Analytic) {
            const int detected = int(rng.below(std::uint32_t(k)));
            if (rng.bernoulli(conditional_capture(z0, sf, k - 1))) winner = tx[detected];
        } else {
            const int detected = int(rng.below(std::uint32_t(k)));
            powers.clear();
            powers.push_back(0.0);
            for (int j = 0; j < k; ++j)
                if (j != detected) powers.push_back(rng.exponential(p0));
            powers[0] = rng.exponential(p0);
            if (sample_capture(powers, z0, sf).has_value()) winner = tx[detected];
        }

        bool delivered = winner >= 0;
        if (delivered && config.capture_then_error && rng.bernoulli(p_e)) {
            // Sensitivity mode: the captured frame still fails its FCS and
            // draws a NAK; the winner holds its stage.
            delivered = false;
            ++stats.error_slots;
            ++stats.stations[winner].error_losses;
            stats.total_time_us += durations.t_e_us;
            redraw(winner);
            for (int s : tx) {
                if (s == winner) continue;
                ++stats.stations[s].collision_losses;
                stage[s] = std::min(stage[s] + 1, top);
                redraw(s);
            }
            continue;
        }

        if (delivered) {
            ++stats.capture_slots;
            ++stats.stations[winner].captures;
            stats.total_time_us += durations.t_s_us;
            stats.delivered_payload_us += epl_us;
        } else {
            ++stats.collision_slots;
            stats.total_time_us += durations.t_c_us;
        }
        for (int s : tx) {
            if (s == winner) {
                stage[s] = 0;
            } else {
                ++stats.stations[s].collision_losses;
                stage[s] = std::min(stage[s] + 1, top);
            }
            redraw(s);
        }
    }

    stats.empirical_tau = double(stats.attempts) / (double(n) * double(config.slots));
    stats.empirical_s =
        stats.total_time_us > 0.0 ? stats.delivered_payload_us / stats.total_time_us : 0.0;
    return stats;
}

ReplicateStats replicate(const SimConfig& config, int replications) {
    if (replications < 2) throw std::invalid_argument("replicate needs at least two runs");
    std::vector<double> taus, ss;
    taus.reserve(replications);
    ss.reserve(replications);
    for (int r = 0; r < replications; ++r) {
        SimConfig c = config;
        c.seed = config.seed + std::uint64_t(r);
        const SimStats stats = run(c);
        taus.push_back(stats.empirical_tau);
        ss.push_back(stats.empirical_s);
    }
    const auto mean_se = [&](const std::vector<double>& xs, double* mean, double* se) {
        double m = 0.0;
        for (double x : xs) m += x;
        m /= xs.size();
        double var = 0.0;
        for (double x : xs) var += (x - m) * (x - m);
        var /= xs.size() - 1;
        *mean = m;
        *se = std::sqrt(var / xs.size());
    };
    ReplicateStats out;
    out.replications = replications;
    mean_se(taus, &out.tau_mean, &out.tau_se);
    mean_se(ss, &out.s_mean, &out.s_se);
    return out;
}

}  // namespace dcfcap
