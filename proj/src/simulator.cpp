#include "hetpath/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hetpath/csv.hpp"
#include "hetpath/units.hpp"

namespace hetpath {

namespace {

enum class EvKind : uint8_t { segment_arrival = 0, ack_arrival = 1 };

struct Event {
    double time;
    EvKind kind;
    int link;     // 0-based dispatch link for segments, -1 for acks
    int64_t seq;  // 0-based segment index, or cumulative ack value
    int64_t id;   // insertion order, the final tiebreak
};

// Earliest event first; ties resolve deterministically so runs are
// reproducible bit for bit.
struct LaterFirst {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        if (a.link != b.link) return a.link > b.link;
        if (a.seq != b.seq) return a.seq > b.seq;
        return a.id > b.id;
    }
};

}  // namespace

SimReport run_sim(const Scenario& s, const SimOptions& opts) {
    validate_scenario(s);
    if (!(opts.ack_delay_s >= 0.0) || !std::isfinite(opts.ack_delay_s))
        throw std::invalid_argument("ack delay must be finite and >= 0");
    if (opts.max_events < 1)
        throw std::invalid_argument("event budget must be positive");

    const ModelConfig& cfg = s.config;
    const int n = s.paths.size();
    const int64_t total_segments =
        segments_for_bytes(cfg.transfer_bytes, cfg.segment_size_bytes);
    const int64_t last_seg_bytes =
        cfg.transfer_bytes - (total_segments - 1) * cfg.segment_size_bytes;

    SimReport rep;
    std::priority_queue<Event, std::vector<Event>, LaterFirst> queue;
    int64_t next_event_id = 0;
    double now = 0.0;

    // per-link serialization state
    std::vector<double> link_free(static_cast<size_t>(n), 0.0);
    std::vector<int64_t> backlog(static_cast<size_t>(n), 0);

    // sender state
    double cwnd = cfg.init_window_segments;
    double ssthresh = cfg.ssthresh_segments;
    int64_t next_seq = 0;  // next never-sent segment
    int64_t snd_una = 0;   // everything below is cumulatively acked
    int dup_count = 0;
    bool in_recovery = false;
    int64_t recover_point = 0;
    int rr = 0;  // round-robin dispatch pointer, shared by new data and retransmits

    // receiver state
    int64_t rcv_next = 0;           // next in-order segment expected
    std::set<int64_t> buffered;     // out-of-order segments held back
    int unacked_in_order = 0;       // delayed-ack countdown
    int64_t last_ack_value = -1;    // most recent cumulative ack emitted

    const auto seg_bytes = [&](int64_t seq) {
        return seq == total_segments - 1 ? last_seg_bytes
                                         : cfg.segment_size_bytes;
    };

    const auto emit_segment = [&](int64_t seq, bool is_retransmit) {
        const int link = rr;
        rr = (rr + 1) % n;
        const Link& l = s.paths.links[static_cast<size_t>(link)];
        const double start = std::max(now, link_free[static_cast<size_t>(link)]);
        const double tx_time =
            bytes_to_bits(static_cast<double>(seg_bytes(seq))) / l.bandwidth_bps;
        link_free[static_cast<size_t>(link)] = start + tx_time;
        ++backlog[static_cast<size_t>(link)];
        rep.max_link_backlog =
            std::max(rep.max_link_backlog, backlog[static_cast<size_t>(link)]);
        ++rep.segments_sent;
        if (is_retransmit) ++rep.retransmissions;
        queue.push({link_free[static_cast<size_t>(link)] + l.delay_s,
                    EvKind::segment_arrival, link, seq, next_event_id++});
    };

    const auto fill_window = [&] {
        // usable window in whole segments; the epsilon forgives the drift
        // that fractional congestion-avoidance increments accumulate
        while (next_seq < total_segments &&
               static_cast<double>(next_seq - snd_una) + 1.0 <= cwnd + 1e-9) {
            emit_segment(next_seq, false);
            ++next_seq;
        }
    };

    const auto emit_ack = [&](int64_t value) {
        unacked_in_order = 0;
        last_ack_value = value;
        queue.push({now + opts.ack_delay_s, EvKind::ack_arrival, -1, value,
                    next_event_id++});
    };

    fill_window();

    bool finished = false;
    int64_t events = 0;
    while (!finished) {
        if (queue.empty()) {
            if (rcv_next > last_ack_value) {
                // nothing is in flight but the receiver owes a delayed ack;
                // without this nudge a window smaller than the ack threshold
                // would wedge the transfer (the stand-in for the real-world
                // delayed-ack timer)
                emit_ack(rcv_next);
                continue;
            }
            std::ostringstream msg;
            msg << "simulation stalled at t=" << now << "s with "
                << rcv_next * cfg.segment_size_bytes << " of "
                << cfg.transfer_bytes << " bytes delivered (snd_una=" << snd_una
                << ", next_seq=" << next_seq << ", cwnd=" << cwnd << ")";
            throw std::runtime_error(msg.str());
        }

        if (++events > opts.max_events)
            throw std::runtime_error("event budget exceeded; simulation aborted");

        const Event ev = queue.top();
        queue.pop();
        now = ev.time;

        if (ev.kind == EvKind::segment_arrival) {
            --backlog[static_cast<size_t>(ev.link)];
            if (opts.log_arrivals)
                rep.arrivals.push_back({ev.seq + 1, now, ev.link + 1});

            if (ev.seq < rcv_next) {
                // already-covered data (a late retransmit); restate the ack
                ++rep.spurious_retransmissions;
                emit_ack(rcv_next);
            } else if (ev.seq == rcv_next) {
                const bool had_gap = !buffered.empty();
                ++rcv_next;
                while (!buffered.empty() && *buffered.begin() == rcv_next) {
                    buffered.erase(buffered.begin());
                    ++rcv_next;
                }
                if (rcv_next == total_segments) {
                    finished = true;
                    break;
                }
                if (had_gap) {
                    // progress past (part of) a hole is acked immediately
                    emit_ack(rcv_next);
                } else if (++unacked_in_order >= cfg.m_ack) {
                    emit_ack(rcv_next);
                }
            } else {
                buffered.insert(ev.seq);
                ++rep.out_of_order_arrivals;
                emit_ack(rcv_next);  // duplicate ack advertising the hole
            }
        } else {
            ++rep.acks_received;
            const int64_t value = ev.seq;
            if (value > snd_una) {
                snd_una = value;
                dup_count = 0;
                if (in_recovery) {
                    if (value >= recover_point) {
                        in_recovery = false;
                        cwnd = ssthresh;
                    } else {
                        // partial ack: the next hole starts at the new snd_una
                        emit_segment(snd_una, true);
                    }
                } else {
                    cwnd += cwnd < ssthresh ? 1.0 : 1.0 / cwnd;
                }
                fill_window();
            } else {
                ++rep.duplicate_acks;
                ++dup_count;
                if (opts.fast_retransmit) {
                    if (!in_recovery && dup_count == 3) {
                        ssthresh = std::max(
                            static_cast<double>(next_seq - snd_una) / 2.0, 2.0);
                        cwnd = ssthresh + 3.0;
                        in_recovery = true;
                        recover_point = next_seq;
                        emit_segment(snd_una, true);
                    } else if (in_recovery) {
                        cwnd += 1.0;  // window inflation per extra duplicate
                        fill_window();
                    }
                }
            }
        }
    }

    rep.bytes_delivered = cfg.transfer_bytes;
    rep.finish_time_s = now;
    rep.throughput_Bps = static_cast<double>(cfg.transfer_bytes) / now;
    rep.throughput_bps =
        bytes_to_bits(static_cast<double>(cfg.transfer_bytes)) / now;
    return rep;
}

std::string arrivals_to_csv(const SimReport& report) {
    std::ostringstream out;
    out << "segment,arrival_time_s,link\n";
    for (const ArrivalRecord& a : report.arrivals)
        out << a.segment << ',' << fmt_double(a.time_s) << ',' << a.link
            << '\n';
    return out.str();
}

}  // namespace hetpath
