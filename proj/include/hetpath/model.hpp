#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetpath/core.hpp"

namespace hetpath {

// Analytical throughput model for one TCP flow whose segments are dispatched
// round-robin over n heterogeneous links. Time advances in sender rounds: a
// round transmits a batch of C segments and ends at the first cumulative ACK,
// whose expected timing and coverage come from the reordering distributions.

struct RoundContext {
    int64_t round_index = 1;      // 1-based
    double batch = 1.0;           // C for this round, real-valued
    int batch_int = 1;            // max(1, llround(batch)); used for dispatch
    double window = 1.0;          // congestion window in segments
    int64_t prior_segments = 0;   // rounded total dispatched in earlier rounds
    const PathSet* paths = nullptr;
    const ModelConfig* config = nullptr;
};

RoundContext make_round_context(const Scenario& s, int64_t round_index,
                                double batch, double window,
                                double prior_segment_total);

struct RoundOutcome {
    double expected_duration_s = 0.0;  // sender-side wait for the round's ACK
    double expected_acked = 0.0;       // segments that ACK covers
};

// 1-based link carrying the j-th segment of a round: the round-robin pointer
// continues across rounds, offset by the prior segment total.
int link_index(int64_t j, int n, int64_t prior_segments);

// Arrival time of the round's j-th segment, measured from the round start:
// queueing-inflated serialization plus propagation on its link.
double segment_delay(const RoundContext& ctx, int64_t j);

// Expected round duration and ACK coverage, mixing the in-order-start and
// reordered-start cases by the head segment's first-arrival probability.
// Deterministic shortcuts: a single-segment batch, and n == 1 where arrivals
// cannot reorder.
RoundOutcome expected_round(const RoundContext& ctx);

// Same expectation, evaluated through the rearranged gap-sum form: the
// first-segment delay plus probability-weighted delay gaps. Kept as an
// independent numerical route for equivalence checks.
double expected_duration_rearranged(const RoundContext& ctx);

// Delay gap D_k - D_1 of a round, decomposed into propagation difference,
// bandwidth difference, and queueing terms. Matches the direct difference
// exactly when n >= 2.
double delay_gap(const RoundContext& ctx, int64_t k);

// Rounds spent in slow start: ssthresh minus initial window, in segments.
int64_t slow_start_rounds(const ModelConfig& cfg);

// Window and batch recurrences. Slow start adds one segment per round;
// afterwards growth is 1/w per round.
double next_window(double window, int64_t round_index, int64_t ss_rounds);
double next_batch(double expected_acked, double window, int64_t round_index,
                  int64_t ss_rounds);

struct RoundRecord {
    int64_t round = 0;
    double window = 0.0;
    double batch = 0.0;
    double expected_duration_s = 0.0;
    double expected_acked_next = 0.0;
    double cum_bytes = 0.0;
    double cum_time_s = 0.0;
};

struct ThroughputReport {
    std::vector<RoundRecord> rounds;
    int64_t transfer_bytes = 0;
    double total_segments = 0.0;       // real-valued sum of batches
    double total_time_s = 0.0;
    double avg_throughput_Bps = 0.0;   // transfer_bytes / total_time_s
    double avg_throughput_bps = 0.0;   // bits per second, the display default
};

// Iterates rounds until the cumulative dispatched bytes reach the transfer
// size; throws std::runtime_error at max_rounds to catch runaway configs.
ThroughputReport run_model(const Scenario& s, int64_t max_rounds = 10'000'000);

// CSV with columns round,w,C,E_T_s,E_A_next,cum_bytes,cum_time_s and a final
// summary row (round column = "summary", carrying transfer size and total
// time).
std::string report_to_csv(const ThroughputReport& report);

}  // namespace hetpath
