#pragma once

#include "dcfcap/phy_error.hpp"

namespace dcfcap {

/// 802.11b MAC/PHY constants. Byte sizes and timings follow the usual
/// 11 Mbps parameter set; rates are in Mbps, times in microseconds.
struct MacParams {
    int mac_header_bytes = 24;
    int phy_header_bytes = 16;
    int payload_bytes = 1024;
    int ack_bytes = 14;
    int nak_bytes = 14;
    double basic_rate_mbps = 1.0;
    double data_rate_mbps = 11.0;
    double slot_us = 20.0;
    double sifs_us = 10.0;
    double difs_us = 50.0;
    double ack_timeout_us = 300.0;
    double prop_delay_us = 1.0;
    /// Adds SIFS + DIFS to the error-slot duration (off by default).
    bool extended_error_slot = false;

    FrameLayout layout() const;
    double header_time_us() const;   // PHY header at basic rate + MAC header at data rate
    double payload_time_us() const;  // payload at data rate
    double ack_time_us() const;      // PHY header + ACK body, both at basic rate
    double nak_time_us() const;
};

/// Channel-occupancy times of the four slot outcomes, microseconds.
struct SlotDurations {
    double t_s_us;   // successful delivery (data + SIFS + ACK + DIFS + 2*prop)
    double t_c_us;   // unresolved collision (data + ACK timeout)
    double t_e_us;   // noise-corrupted frame answered by a NAK
    double sigma_us; // empty slot
};

SlotDurations slot_durations(const MacParams& mac);

}  // namespace dcfcap
