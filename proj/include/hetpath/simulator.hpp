#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetpath/core.hpp"

namespace hetpath {

// Deterministic packet-level companion to the analytical model: one sender,
// one receiver, n FIFO links with fixed rate and propagation delay, segments
// sprayed round-robin, delayed ACKs, instantaneous (or fixed-delay) ACK path,
// no loss, no timers.

struct SimOptions {
    bool fast_retransmit = false;   // react to triple duplicate ACKs
    double ack_delay_s = 0.0;       // receiver-to-sender path delay
    bool log_arrivals = false;
    int64_t max_events = 100'000'000;  // safety valve against stuck configs
};

struct ArrivalRecord {
    int64_t segment = 0;  // 1-based
    double time_s = 0.0;
    int link = 0;         // 1-based
};

struct SimReport {
    int64_t bytes_delivered = 0;
    double finish_time_s = 0.0;        // arrival completing the in-order data
    double throughput_Bps = 0.0;
    double throughput_bps = 0.0;
    int64_t segments_sent = 0;         // including retransmissions
    int64_t retransmissions = 0;
    int64_t spurious_retransmissions = 0;  // arrivals already below cum ack
    int64_t acks_received = 0;
    int64_t duplicate_acks = 0;
    int64_t out_of_order_arrivals = 0;
    int64_t max_link_backlog = 0;      // diagnostics: peak queued-or-in-flight
    std::vector<ArrivalRecord> arrivals;  // populated when log_arrivals set
};

SimReport run_sim(const Scenario& s, const SimOptions& opts = {});

// CSV with columns segment,arrival_time_s,link.
std::string arrivals_to_csv(const SimReport& report);

}  // namespace hetpath
