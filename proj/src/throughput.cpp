#include "dcfcap/throughput.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace dcfcap {

double p_transmit(int n, double tau) {
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
    return -std::expm1(n * std::log1p(-tau));
}

double p_success(int n, double tau, double p_cap) {
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::domain_error("p_success is undefined without transmissions (tau = 0)");
    if (!(p_cap >= 0.0 && p_cap <= 1.0)) throw std::invalid_argument("p_cap must lie in [0,1]");
    const double num = n * tau * std::pow(1.0 - tau, n - 1) + p_cap;
    const double den = p_transmit(n, tau);
    if (num > den) {
        std::cerr << "p_success: delivery probability exceeded p_tr; clamping to 1\n";
        return 1.0;
    }
    return num / den;
}

ThroughputReport saturation_throughput(const ChainSolution& solution, const MacParams& mac,
                                       ErrorAccounting accounting) {
    if (solution.n < 1) throw std::invalid_argument("solution has no stations");
    const int n = solution.n;
    const double tau = solution.tau;
    const double pe = solution.inputs.p_e;
    const double pcap = solution.p_cap_slot;

    ThroughputReport report;
    report.p_e = pe;
    report.p_cap = pcap;
    report.tau = tau;
    report.durations = slot_durations(mac);
    report.accounting = accounting;
    if (tau <= 0.0) return report;  // idle network, S = 0

    const auto& d = report.durations;
    const double epl = mac.payload_time_us();
    const double ptr = p_transmit(n, tau);
    const double p_one = n * tau * std::pow(1.0 - tau, n - 1);
    report.p_tr = ptr;
    report.p_s = p_success(n, tau, pcap);

    double delivered_us, expected_slot_us;
    if (accounting == ErrorAccounting::Lumped) {
        const double ps = report.p_s;
        delivered_us = ptr * ps * (1.0 - pe) * epl;
        expected_slot_us = (1.0 - ptr) * d.sigma_us + ptr * (1.0 - ps) * d.t_c_us +
                           ptr * ps * pe * d.t_e_us + ptr * ps * (1.0 - pe) * d.t_s_us;
    } else {
        // Captured frames are never answered by a NAK; only lone
        // transmissions face the channel error.
        const double delivered_p = p_one * (1.0 - pe) + pcap;
        const double errored_p = p_one * pe;
        const double collided_p = ptr - p_one - pcap;
        delivered_us = delivered_p * epl;
        expected_slot_us = (1.0 - ptr) * d.sigma_us + collided_p * d.t_c_us +
                           errored_p * d.t_e_us + delivered_p * d.t_s_us;
    }
    report.s = delivered_us / expected_slot_us;
    report.s_mbps = report.s * mac.data_rate_mbps;
    return report;
}

ThroughputReport bianchi_throughput(int n, const MacParams& mac, const BackoffParams& backoff) {
    ChainSolution ideal;
    ideal.n = n;
    ideal.tau = bianchi_tau(n, backoff).tau;
    ideal.inputs = {1.0 - std::pow(1.0 - ideal.tau, n - 1), 0.0, 0.0};
    ideal.p_cap_slot = 0.0;
    return saturation_throughput(ideal, mac);
}

}  // namespace dcfcap
