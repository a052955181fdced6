#include "dcfcap/phy_error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcfcap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::vector<SerTerm> ser_terms(Rate rate, SerFormula formula) {
    switch (rate) {
        case Rate::Mbps1:
            return {{1.0, 11.0}};
        case Rate::Mbps2:
            return {{1.0, 5.5}};
        case Rate::Mbps5_5:
            return {{14.0, 8.0}, {1.0, 16.0}};
        case Rate::Mbps11: {
            const double last = formula == SerFormula::Literal ? 4.0 : 16.0;
            return {{24.0, 4.0}, {16.0, 6.0}, {174.0, 8.0},
                    {16.0, 10.0}, {24.0, 12.0}, {1.0, last}};
        }
    }
    throw std::invalid_argument("unknown rate");
}

void check_model(const RateModel& model) {
    if (model.terms.empty()) throw std::invalid_argument("rate model needs at least one SER term");
    for (const auto& t : model.terms)
        if (!(t.multiplicity > 0.0) || !(t.scale > 0.0))
            throw std::invalid_argument("SER term multiplicities and scales must be positive");
    if (model.bits_per_symbol < 1) throw std::invalid_argument("bits_per_symbol must be >= 1");
    const int k = model.bits_per_symbol;
    const double expected =
        k == 1 ? 1.0 : std::ldexp(1.0, k - 1) / (std::ldexp(1.0, k) - 1.0);
    if (std::abs(model.ber_factor - expected) > 1e-15)
        throw std::invalid_argument("ber_factor inconsistent with bits_per_symbol");
}

}  // namespace

RateModel RateModel::make(Rate rate, SerFormula formula) {
    RateModel model;
    model.rate = rate;
    model.terms = ser_terms(rate, formula);
    switch (rate) {
        case Rate::Mbps1:
        case Rate::Mbps2:
            model.bits_per_symbol = 1;
            model.ber_factor = 1.0;
            break;
        case Rate::Mbps5_5:
            model.bits_per_symbol = 4;
            model.ber_factor = 8.0 / 15.0;
            break;
        case Rate::Mbps11:
            model.bits_per_symbol = 8;
            model.ber_factor = 128.0 / 255.0;
            break;
    }
    check_model(model);
    return model;
}

RateModel RateModel::from_mbps(double mbps, SerFormula formula) {
    if (mbps == 1.0) return make(Rate::Mbps1, formula);
    if (mbps == 2.0) return make(Rate::Mbps2, formula);
    if (mbps == 5.5) return make(Rate::Mbps5_5, formula);
    if (mbps == 11.0) return make(Rate::Mbps11, formula);
    throw std::invalid_argument("data rate must be one of 1, 2, 5.5, 11 Mbps");
}

double RateModel::mbps() const {
    switch (rate) {
        case Rate::Mbps1: return 1.0;
        case Rate::Mbps2: return 2.0;
        case Rate::Mbps5_5: return 5.5;
        case Rate::Mbps11: return 11.0;
    }
    return 0.0;
}

double q_function(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_function: non-finite argument");
    return 0.5 * std::erfc(x / kSqrt2);
}

double ser(const RateModel& model, double sinr) {
    check_model(model);
    if (!(sinr >= 0.0)) throw std::invalid_argument("ser: sinr must be a nonnegative linear ratio");
    double sum = 0.0;
    for (const auto& t : model.terms) sum += t.multiplicity * q_function(std::sqrt(t.scale * sinr));
    return std::clamp(sum, 0.0, 1.0);
}

double ber(const RateModel& model, double sinr) {
    return model.ber_factor * ser(model, sinr);
}

double frame_error_from_bers(const FrameLayout& layout, double ber_basic, double ber_data) {
    if (layout.phy_header_bits < 0 || layout.mac_header_bits < 0 || layout.payload_bits < 0 ||
        layout.ack_bits < 0 || layout.nak_bits < 0)
        throw std::invalid_argument("frame layout fields must be nonnegative");
    if (layout.nak_bits != layout.ack_bits)
        throw std::invalid_argument("NAK frames mirror the ACK structure; lengths must match");
    if (!(ber_basic >= 0.0 && ber_basic <= 1.0 && ber_data >= 0.0 && ber_data <= 1.0))
        throw std::invalid_argument("bit error rates must lie in [0,1]");
    const double header_ok = std::pow(1.0 - ber_basic, layout.phy_header_bits);
    const double body_ok = std::pow(1.0 - ber_data, layout.mac_header_bits + layout.payload_bits);
    return std::clamp(1.0 - header_ok * body_ok, 0.0, 1.0);
}

double frame_error_prob(const FrameLayout& layout, const RateModel& data_model,
                        const RateModel& basic_model, double sinr) {
    return frame_error_from_bers(layout, ber(basic_model, sinr), ber(data_model, sinr));
}

}  // namespace dcfcap
