#include "dcfcap/dcf_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dcfcap {

namespace {

void check_backoff(const BackoffParams& params) {
    if (params.w0 < 2) throw std::invalid_argument("minimum contention window must be >= 2");
    if (params.max_stage < 0 || params.max_stage > 24)
        throw std::invalid_argument("max backoff stage out of range");
}

void check_inputs(const ChainInputs& in) {
    auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!ok(in.p_col) || !ok(in.p_e) || !ok(in.p_cap))
        throw std::invalid_argument("chain inputs must be probabilities");
}

struct OutcomeMasses {
    double reset;    // successful delivery, back to stage 0
    double hold;     // channel error, same stage redrawn
    double escalate; // uncaptured collision, next stage
};

OutcomeMasses outcome_masses(const ChainInputs& in) {
    OutcomeMasses m;
    m.hold = (1.0 - in.p_col) * in.p_e;
    m.escalate = in.p_col * (1.0 - in.p_cap);
    m.reset = 1.0 - m.hold - m.escalate;  // = (1-p_col)(1-p_e) + p_col p_cap
    return m;
}

}  // namespace

int contention_window(int stage, const BackoffParams& params) {
    check_backoff(params);
    if (stage < 0) throw std::invalid_argument("backoff stage must be nonnegative");
    const int capped = std::min(stage, params.max_stage);
    return params.w0 << capped;
}

std::vector<double> stationary_head(const ChainInputs& inputs, const BackoffParams& params) {
    check_backoff(params);
    check_inputs(inputs);
    const auto m = outcome_masses(inputs);
    const int top = params.max_stage;

    if (1.0 - m.hold <= 0.0)
        throw DegenerateChainError("error-holding is certain: the redraw loop absorbs the chain");
    if (top >= 1 && m.reset <= 0.0)
        throw DegenerateChainError("zero per-attempt success probability: stage m absorbs the chain");

    const double q = m.escalate / (1.0 - m.hold);
    std::vector<double> coef(top + 1);
    double qi = 1.0;
    for (int i = 0; i < top; ++i) {
        coef[i] = qi;
        qi *= q;
    }
    coef[top] = top == 0 ? 1.0 : std::pow(q, top - 1) * m.escalate / m.reset;

    double norm = 0.0;
    for (int i = 0; i <= top; ++i)
        norm += coef[i] * (contention_window(i, params) + 1) / 2.0;
    std::vector<double> head(top + 1);
    for (int i = 0; i <= top; ++i) head[i] = coef[i] / norm;
    return head;
}

std::vector<double> expand_stationary(const std::vector<double>& head,
                                      const BackoffParams& params) {
    check_backoff(params);
    if (head.size() != static_cast<std::size_t>(params.max_stage + 1))
        throw std::invalid_argument("head vector size does not match the stage count");
    std::vector<double> full(chain_state_count(params));
    std::size_t at = 0;
    for (int i = 0; i <= params.max_stage; ++i) {
        const int w = contention_window(i, params);
        for (int k = 0; k < w; ++k) full[at++] = head[i] * double(w - k) / w;
    }
    return full;
}

std::size_t chain_state_count(const BackoffParams& params) {
    check_backoff(params);
    std::size_t count = 0;
    for (int i = 0; i <= params.max_stage; ++i) count += contention_window(i, params);
    return count;
}

std::size_t chain_state_index(int stage, int counter, const BackoffParams& params) {
    check_backoff(params);
    if (stage < 0 || stage > params.max_stage) throw std::invalid_argument("stage out of range");
    if (counter < 0 || counter >= contention_window(stage, params))
        throw std::invalid_argument("counter out of range");
    std::size_t base = 0;
    for (int i = 0; i < stage; ++i) base += contention_window(i, params);
    return base + counter;
}

StochasticMatrix transition_matrix(const ChainInputs& inputs, const BackoffParams& params) {
    check_backoff(params);
    check_inputs(inputs);
    const auto m = outcome_masses(inputs);
    const int top = params.max_stage;

    StochasticMatrix matrix;
    matrix.size = chain_state_count(params);
    matrix.a.assign(matrix.size * matrix.size, 0.0);

    const int w0 = contention_window(0, params);
    for (int i = 0; i <= top; ++i) {
        const int wi = contention_window(i, params);
        for (int k = 1; k < wi; ++k) {
            matrix.at(chain_state_index(i, k, params), chain_state_index(i, k - 1, params)) = 1.0;
        }
        const std::size_t from = chain_state_index(i, 0, params);
        for (int k = 0; k < w0; ++k)
            matrix.at(from, chain_state_index(0, k, params)) += m.reset / w0;
        if (i < top) {
            for (int k = 0; k < wi; ++k)
                matrix.at(from, chain_state_index(i, k, params)) += m.hold / wi;
            const int wn = contention_window(i + 1, params);
            for (int k = 0; k < wn; ++k)
                matrix.at(from, chain_state_index(i + 1, k, params)) += m.escalate / wn;
        } else {
            // Both failure modes redraw within the top stage.
            for (int k = 0; k < wi; ++k)
                matrix.at(from, chain_state_index(i, k, params)) += (m.hold + m.escalate) / wi;
        }
    }
    return matrix;
}

std::vector<double> stationary_by_power_iteration(const StochasticMatrix& matrix, double tol,
                                                  int max_squarings) {
    const std::size_t n = matrix.size;
    if (n == 0 || matrix.a.size() != n * n)
        throw std::invalid_argument("malformed transition matrix");

    std::vector<double> cur = matrix.a;
    std::vector<double> next(n * n);
    std::vector<double> row0 = std::vector<double>(cur.begin(), cur.begin() + n);
    for (int s = 0; s < max_squarings; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) next[i * n + j] = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double v = cur[i * n + k];
                if (v == 0.0) continue;
                const double* src = &cur[k * n];
                double* dst = &next[i * n];
                for (std::size_t j = 0; j < n; ++j) dst[j] += v * src[j];
            }
        }
        cur.swap(next);
        double diff = 0.0;
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(cur[j] - row0[j]));
        std::copy(cur.begin(), cur.begin() + n, row0.begin());
        if (diff < tol && s >= 2) break;
    }
    // Average rows; each one has converged to the stationary vector.
    std::vector<double> pi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pi[j] += cur[i * n + j];
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (auto& v : pi) v /= total;
    return pi;
}

BianchiResult bianchi_tau(int n, const BackoffParams& params) {
    check_backoff(params);
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    const double w = params.w0;
    const int m = params.max_stage;
    const auto tau_of_p = [&](double p) {
        double geo = 0.0, t = 1.0;
        for (int j = 0; j < m; ++j) {
            geo += t;
            t *= 2.0 * p;
        }
        return 2.0 / ((w + 1.0) + p * w * geo);
    };
    if (n == 1) return {tau_of_p(0.0), 0.0};

    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid - (1.0 - std::pow(1.0 - tau_of_p(mid), n - 1));
        (f < 0.0 ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    return {tau_of_p(p), p};
}

ChainSolution solve_fixed_point(int n, const MacParams& mac, const ChannelParams& channel,
                                const BackoffParams& backoff, const SolveOptions& options) {
    check_backoff(backoff);
    if (n < 1) throw std::invalid_argument("station count must be >= 1");
    if (!(channel.sinr >= 0.0)) throw std::invalid_argument("sinr must be nonnegative");

    const double p_e =
        frame_error_prob(mac.layout(), channel.data_model, channel.basic_model, channel.sinr);

    const auto chain_tau = [&](double tau, ChainInputs* out_inputs,
                               std::vector<double>* out_head) {
        ChainInputs in;
        in.p_col = n > 1 ? -std::expm1((n - 1) * std::log1p(-tau)) : 0.0;
        in.p_e = p_e;
        in.p_cap = chain_capture_prob(channel.capture, n, tau, options.capture_semantics);
        auto head = stationary_head(in, backoff);
        const double t = std::accumulate(head.begin(), head.end(), 0.0);
        if (out_inputs) *out_inputs = in;
        if (out_head) *out_head = std::move(head);
        return t;
    };

    const double lo_bound = 1e-9, hi_bound = 1.0 - 1e-9;
    double tau = 2.0 / (backoff.w0 + 1.0);
    double residual = 0.0;
    int iterations = 0;
    int alternations = 0;
    double prev_residual = 0.0;
    bool bisect = false;

    for (; iterations < options.max_iterations; ++iterations) {
        residual = chain_tau(tau, nullptr, nullptr) - tau;
        if (std::abs(residual) <= options.tolerance) break;
        if (!bisect) {
            if (iterations > 0 && residual * prev_residual < 0.0) {
                if (++alternations >= 3) bisect = true;
            } else if (residual * prev_residual > 0.0) {
                alternations = 0;
            }
            prev_residual = residual;
        }
        if (bisect) break;
        tau = std::clamp(tau + options.damping * residual, lo_bound, hi_bound);
    }

    if (bisect) {
        // f(tau) = chain_tau(tau) - tau is positive near 0 and negative near
        // 1 for every parameterisation the damped iteration stalls on.
        double lo = lo_bound, hi = hi_bound;
        for (; iterations < options.max_iterations; ++iterations) {
            tau = 0.5 * (lo + hi);
            residual = chain_tau(tau, nullptr, nullptr) - tau;
            if (std::abs(residual) <= options.tolerance || hi - lo <= 1e-16) break;
            (residual > 0.0 ? lo : hi) = tau;
        }
    }

    if (std::abs(residual) > options.tolerance)
        throw ConvergenceError("fixed point did not converge", tau, residual, iterations);

    ChainSolution sol;
    sol.tau = chain_tau(tau, &sol.inputs, &sol.head);
    sol.residual = residual;
    sol.iterations = iterations;
    sol.n = n;
    sol.p_cap_slot = capture_prob(channel.capture, n, sol.tau);
    return sol;
}

}  // namespace dcfcap
