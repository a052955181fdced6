#pragma once

#include <vector>

namespace dcfcap {

/// 802.11b transmission rates. DBPSK/DQPSK carry the two basic rates,
/// CCK the two high rates.
enum class Rate { Mbps1, Mbps2, Mbps5_5, Mbps11 };

/// Selects the final codeword term of the 11 Mbps CCK union bound.
/// Corrected uses 16*SINR (consistent with the codeword-distance spectrum);
/// Literal keeps the 4*SINR variant that circulates in older rate tables.
enum class SerFormula { Corrected, Literal };

/// One additive term of a symbol-error union bound:
/// multiplicity * Q(sqrt(scale * sinr)).
struct SerTerm {
    double multiplicity;
    double scale;
};

/// Per-rate symbol error model plus the symbol-to-bit conversion factor.
///
/// ber_factor is 2^(k-1)/(2^k - 1) for k = bits_per_symbol > 1 and exactly 1
/// for single-bit symbols; the constructor-checked invariant keeps the two
/// fields consistent.
struct RateModel {
    Rate rate = Rate::Mbps11;
    int bits_per_symbol = 8;
    std::vector<SerTerm> terms;
    double ber_factor = 128.0 / 255.0;

    static RateModel make(Rate rate, SerFormula formula = SerFormula::Corrected);

    /// Maps 1, 2, 5.5 or 11 to the matching model; throws on anything else.
    static RateModel from_mbps(double mbps, SerFormula formula = SerFormula::Corrected);

    double mbps() const;
};

/// Frame section lengths in bits. The PHY header always travels at the
/// basic rate, everything after it at the data rate.
struct FrameLayout {
    int phy_header_bits = 128;
    int mac_header_bits = 192;
    int payload_bits = 8192;
    int ack_bits = 112;
    int nak_bits = 112;
};

/// Gaussian tail probability P(N(0,1) > x).
double q_function(double x);

/// Union-bound symbol error rate at a linear SINR, clamped to [0,1]
/// (the CCK bound exceeds 1 at very low SINR).
double ser(const RateModel& model, double sinr);

/// Effective bit error rate: ber_factor * ser.
double ber(const RateModel& model, double sinr);

/// Frame error probability from already-computed section BERs:
/// 1 - (1-ber_basic)^phy * (1-ber_data)^(mac+payload).
double frame_error_from_bers(const FrameLayout& layout, double ber_basic, double ber_data);

/// Frame error probability at a linear SINR with the PHY header evaluated
/// under the basic-rate model and the rest under the data-rate model.
double frame_error_prob(const FrameLayout& layout, const RateModel& data_model,
                        const RateModel& basic_model, double sinr);

}  // namespace dcfcap
