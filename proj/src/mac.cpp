#include "dcfcap/mac.hpp"

#include <stdexcept>

namespace dcfcap {

namespace {

void check(const MacParams& mac) {
    if (mac.mac_header_bytes < 0 || mac.phy_header_bytes < 0 || mac.payload_bytes < 0 ||
        mac.ack_bytes < 0 || mac.nak_bytes < 0)
        throw std::invalid_argument("frame sizes must be nonnegative");
    if (mac.nak_bytes != mac.ack_bytes)
        throw std::invalid_argument("NAK frames mirror the ACK structure; sizes must match");
    if (!(mac.basic_rate_mbps > 0.0) || !(mac.data_rate_mbps > 0.0))
        throw std::invalid_argument("rates must be positive");
    if (!(mac.slot_us > 0.0) || mac.sifs_us < 0.0 || mac.difs_us < 0.0 ||
        mac.ack_timeout_us < 0.0 || mac.prop_delay_us < 0.0)
        throw std::invalid_argument("timing parameters out of range");
}

}  // namespace

FrameLayout MacParams::layout() const {
    check(*this);
    FrameLayout l;
    l.phy_header_bits = phy_header_bytes * 8;
    l.mac_header_bits = mac_header_bytes * 8;
    l.payload_bits = payload_bytes * 8;
    l.ack_bits = ack_bytes * 8;
    l.nak_bits = nak_bytes * 8;
    return l;
}

double MacParams::header_time_us() const {
    return phy_header_bytes * 8 / basic_rate_mbps + mac_header_bytes * 8 / data_rate_mbps;
}

double MacParams::payload_time_us() const {
    return payload_bytes * 8 / data_rate_mbps;
}

double MacParams::ack_time_us() const {
    // Control frames ride the basic rate behind their own PHY header.
    return (phy_header_bytes * 8 + ack_bytes * 8) / basic_rate_mbps;
}

double MacParams::nak_time_us() const {
    return (phy_header_bytes * 8 + nak_bytes * 8) / basic_rate_mbps;
}

SlotDurations slot_durations(const MacParams& mac) {
    check(mac);
    const double data = mac.header_time_us() + mac.payload_time_us();
    SlotDurations d;
    d.sigma_us = mac.slot_us;
    d.t_s_us = data + mac.sifs_us + mac.ack_time_us() + mac.difs_us + 2.0 * mac.prop_delay_us;
    d.t_c_us = data + mac.ack_timeout_us;
    d.t_e_us = data + mac.nak_time_us();
    if (mac.extended_error_slot) d.t_e_us += mac.sifs_us + mac.difs_us;
    return d;
}

}  // namespace dcfcap
