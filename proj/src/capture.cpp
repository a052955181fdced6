#include "dcfcap/capture.hpp"

#include <cmath>
#include <stdexcept>

namespace dcfcap {

namespace {

double binomial(int n, int k) {
    // Exact in double for the station counts handled here (n <= ~500).
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

void check_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
}

}  // namespace

double CaptureParams::local_mean_power() const {
    if (geometry) {
        const double p0 = geometry->attenuation_a *
                          std::pow(geometry->distance, -path_loss_exponent) * geometry->tx_power;
        if (!(p0 > 0.0)) throw std::invalid_argument("geometry yields nonpositive mean power");
        return p0;
    }
    if (!(mean_power > 0.0)) throw std::invalid_argument("mean power must be positive");
    return mean_power;
}

double processing_gain(int spreading_factor) {
    if (spreading_factor < 1) throw std::invalid_argument("spreading factor must be >= 1");
    return 2.0 / (3.0 * spreading_factor);
}

double conditional_capture(double z0, int spreading_factor, int interferers) {
    if (!(z0 > 0.0)) throw std::invalid_argument("capture ratio z0 must be positive");
    if (interferers < 0) throw std::invalid_argument("interferer count must be nonnegative");
    return std::pow(1.0 + z0 * processing_gain(spreading_factor), -interferers);
}

double interferer_weight(int n, double tau, int i) {
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    check_tau(tau);
    if (i < 0 || i > n - 1) throw std::invalid_argument("interferer index out of [0, n-1]");
    return binomial(n, i + 1) * std::pow(tau, i + 1) * std::pow(1.0 - tau, n - i - 1);
}

double capture_prob(const CaptureParams& params, int n, double tau) {
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    check_tau(tau);
    if (!(params.z0 > 0.0)) throw std::invalid_argument("capture ratio z0 must be positive");
    const double c = params.z0 * processing_gain(params.spreading_factor);
    const double survive = 1.0 / (1.0 + c);
    if (tau == 1.0) {
        // Only the all-transmit term survives; the recurrence below divides
        // by (1 - tau).
        return n >= 2 ? std::pow(survive, n - 1) : 0.0;
    }
    // R_i by the ratio recurrence; every factor stays in [0,1].
    double sum = 0.0;
    double weight = n * tau * std::pow(1.0 - tau, n - 1);  // R_0
    double cond = 1.0;
    for (int i = 1; i <= n - 1; ++i) {
        weight *= (double(n - i) / (i + 1)) * (tau / (1.0 - tau));
        cond *= survive;
        sum += weight * cond;
        if (weight == 0.0) break;
    }
    return sum;
}

double chain_capture_prob(const CaptureParams& params, int n, double tau,
                          CaptureSemantics semantics) {
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    check_tau(tau);
    if (n == 1) return 0.0;
    if (semantics == CaptureSemantics::Aggregate) return capture_prob(params, n, tau);

    const double c = params.z0 * processing_gain(params.spreading_factor);
    const double survive = 1.0 / (1.0 + c);
    // Conditioned on the tagged station transmitting: i of the other n-1
    // stations interfere with probability Binom(n-1, i; tau).
    const int others = n - 1;
    const double p_col = tau < 1.0 ? -std::expm1(others * std::log1p(-tau)) : 1.0;
    if (p_col <= 0.0) {
        // tau -> 0 limit: a collision is a single interferer almost surely.
        return semantics == CaptureSemantics::Matched ? survive / 2.0 : survive;
    }
    double sum = 0.0;
    if (tau < 1.0) {
        double pmf = std::pow(1.0 - tau, others);  // Binom(others, 0)
        double cond = 1.0;
        for (int i = 1; i <= others; ++i) {
            pmf *= (double(others - i + 1) / i) * (tau / (1.0 - tau));
            cond *= survive;
            double term = pmf * cond;
            if (semantics == CaptureSemantics::Matched) term /= i + 1;
            sum += term;
        }
    } else {
        double term = std::pow(survive, others);
        if (semantics == CaptureSemantics::Matched) term /= n;
        sum = term;
    }
    return sum / p_col;
}

std::optional<std::size_t> sample_capture(std::span<const double> powers, double z0,
                                          int spreading_factor) {
    if (powers.size() < 2)
        throw std::invalid_argument("sample_capture needs at least two overlapping frames");
    double interference = 0.0;
    for (std::size_t j = 1; j < powers.size(); ++j) {
        if (!(powers[j] > 0.0)) throw std::invalid_argument("powers must be positive");
        interference += powers[j];
    }
    if (!(powers[0] > 0.0)) throw std::invalid_argument("powers must be positive");
    const double threshold = z0 * processing_gain(spreading_factor);
    if (powers[0] > threshold * interference) return std::size_t{0};
    return std::nullopt;
}

}  // namespace dcfcap
