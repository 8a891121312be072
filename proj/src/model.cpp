#include "hetpath/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hetpath/csv.hpp"
#include "hetpath/reorder_prob.hpp"
#include "hetpath/units.hpp"

namespace hetpath {

RoundContext make_round_context(const Scenario& s, int64_t round_index,
                                double batch, double window,
                                double prior_segment_total) {
    if (round_index < 1)
        throw std::domain_error("round_index must be >= 1");
    if (!(batch >= 0.0) || !std::isfinite(batch))
        throw std::domain_error("batch must be finite and non-negative");
    RoundContext ctx;
    ctx.round_index = round_index;
    ctx.batch = batch;
    ctx.batch_int = static_cast<int>(std::max<int64_t>(1, std::llround(batch)));
    ctx.window = window;
    ctx.prior_segments = std::llround(prior_segment_total);
    ctx.paths = &s.paths;
    ctx.config = &s.config;
    return ctx;
}

int link_index(int64_t j, int n, int64_t prior_segments) {
    if (j < 1) throw std::domain_error("segment position must be >= 1");
    if (n < 1) throw std::domain_error("link count must be >= 1");
    if (prior_segments < 0)
        throw std::domain_error("prior segment total must be >= 0");
    return static_cast<int>((j - 1 + prior_segments) % n) + 1;
}

double segment_delay(const RoundContext& ctx, int64_t j) {
    const PathSet& paths = *ctx.paths;
    const int n = paths.size();
    const Link& link = paths.links[link_index(j, n, ctx.prior_segments) - 1];
    const double seg_bits = bytes_to_bits(
        static_cast<double>(ctx.config->segment_size_bytes));
    // j/n earlier segments already occupy this link's queue in the round's
    // dispatch pattern, plus one slot for the segment itself
    const double slots = static_cast<double>(j / n + 1);
    return slots * seg_bits / link.bandwidth_bps + link.delay_s;
}

namespace {

// Case weights and per-case expectations shared by the two duration routes.
struct CaseSplit {
    MDistribution md;
    QDistribution qd;
    int tail_len = 0;
};

CaseSplit make_split(const RoundContext& ctx) {
    CaseSplit cs;
    cs.md = m_distribution(ctx.batch_int, ctx.config->m_ack);
    cs.qd = q_distribution(ctx.batch_int);
    cs.tail_len = cs.md.tail_length();
    return cs;
}

}  // namespace

RoundOutcome expected_round(const RoundContext& ctx) {
    const int C = ctx.batch_int;
    const int n = ctx.paths->size();
    const int m_ack = ctx.config->m_ack;

    if (C == 1) return {segment_delay(ctx, 1), 1.0};
    if (n == 1) {
        // single link: arrivals cannot reorder, the ack fires at the
        // delayed-ack threshold (or at the whole batch if it is smaller)
        const int a = std::min(m_ack, C);
        return {segment_delay(ctx, a), static_cast<double>(a)};
    }

    const CaseSplit cs = make_split(ctx);

    // head segment arrived first: wait for the in-order prefix
    double dur_first = 0.0, ack_first = 0.0;
    for (size_t i = 0; i < cs.md.p_exact.size(); ++i) {
        const double p = cs.md.p_exact[i];
        if (p == 0.0) continue;
        const int k = static_cast<int>(i) + 1;
        dur_first += segment_delay(ctx, k) * p;
        ack_first += k * p;
    }
    dur_first += segment_delay(ctx, cs.tail_len) * cs.md.p_tail;
    ack_first += cs.tail_len * cs.md.p_tail;

    // head segment delayed: the ack fires when it lands and covers the
    // buffered run behind it
    const double dur_reordered = segment_delay(ctx, 1);
    const double ack_reordered = cs.qd.mean();

    const double pf = p_first(C);
    return {dur_reordered + pf * (dur_first - dur_reordered),
            ack_reordered + pf * (ack_first - ack_reordered)};
}

double expected_duration_rearranged(const RoundContext& ctx) {
    const int C = ctx.batch_int;
    const int n = ctx.paths->size();
    const int m_ack = ctx.config->m_ack;

    if (C == 1) return segment_delay(ctx, 1);
    if (n == 1) return segment_delay(ctx, std::min(m_ack, C));

    const CaseSplit cs = make_split(ctx);
    const double d1 = segment_delay(ctx, 1);
    // head delay plus probability-weighted gaps to the acked position
    double gaps = 0.0;
    for (size_t i = 0; i < cs.md.p_exact.size(); ++i) {
        const double p = cs.md.p_exact[i];
        if (p == 0.0) continue;
        const int k = static_cast<int>(i) + 1;
        gaps += (segment_delay(ctx, k) - d1) * p;
    }
    gaps += (segment_delay(ctx, cs.tail_len) - d1) * cs.md.p_tail;
    return d1 + gaps / static_cast<double>(C);
}

double delay_gap(const RoundContext& ctx, int64_t k) {
    const PathSet& paths = *ctx.paths;
    const int n = paths.size();
    const Link& lk = paths.links[link_index(k, n, ctx.prior_segments) - 1];
    const Link& l1 = paths.links[link_index(1, n, ctx.prior_segments) - 1];
    const double seg_bits = bytes_to_bits(
        static_cast<double>(ctx.config->segment_size_bytes));
    const double prop_term = lk.delay_s - l1.delay_s;
    const double bw_term = (l1.bandwidth_bps - lk.bandwidth_bps) * seg_bits /
                           (lk.bandwidth_bps * l1.bandwidth_bps);
    const double queue_term =
        static_cast<double>(k / n) * seg_bits / lk.bandwidth_bps;
    return prop_term + bw_term + queue_term;
}

int64_t slow_start_rounds(const ModelConfig& cfg) {
    return std::llround(cfg.ssthresh_segments - cfg.init_window_segments);
}

double next_window(double window, int64_t round_index, int64_t ss_rounds) {
    return round_index < ss_rounds ? window + 1.0 : window + 1.0 / window;
}

double next_batch(double expected_acked, double window, int64_t round_index,
                  int64_t ss_rounds) {
    return round_index < ss_rounds ? expected_acked + 1.0
                                   : expected_acked + 1.0 / window;
}

ThroughputReport run_model(const Scenario& s, int64_t max_rounds) {
    validate_scenario(s);
    const ModelConfig& cfg = s.config;
    const int64_t ss_rounds = slow_start_rounds(cfg);
    const double seg_bytes = static_cast<double>(cfg.segment_size_bytes);
    const double target = static_cast<double>(cfg.transfer_bytes);

    ThroughputReport rep;
    rep.transfer_bytes = cfg.transfer_bytes;

    double batch = cfg.init_window_segments;
    double window = cfg.init_window_segments;
    double prior = 0.0;
    double elapsed = 0.0;
    for (int64_t i = 1;; ++i) {
        if (i > max_rounds)
            throw std::runtime_error(
                "transfer did not complete within " + std::to_string(max_rounds) +
                " rounds; check the configuration");
        const RoundContext ctx = make_round_context(s, i, batch, window, prior);
        const RoundOutcome out = expected_round(ctx);
        elapsed += out.expected_duration_s;
        prior += batch;
        rep.rounds.push_back({i, window, batch, out.expected_duration_s,
                              out.expected_acked, seg_bytes * prior, elapsed});
        if (seg_bytes * prior >= target) break;
        batch = next_batch(out.expected_acked, window, i, ss_rounds);
        window = next_window(window, i, ss_rounds);
    }

    rep.total_segments = prior;
    rep.total_time_s = elapsed;
    rep.avg_throughput_Bps = target / elapsed;
    rep.avg_throughput_bps = bytes_to_bits(target) / elapsed;
    return rep;
}

std::string report_to_csv(const ThroughputReport& report) {
    std::ostringstream out;
    out << "round,w,C,E_T_s,E_A_next,cum_bytes,cum_time_s\n";
    for (const RoundRecord& r : report.rounds) {
        out << r.round << ',' << fmt_double(r.window) << ','
            << fmt_double(r.batch) << ',' << fmt_double(r.expected_duration_s)
            << ',' << fmt_double(r.expected_acked_next) << ','
            << fmt_double(r.cum_bytes) << ',' << fmt_double(r.cum_time_s)
            << '\n';
    }
    out << "summary,,,,," << report.transfer_bytes << ','
        << fmt_double(report.total_time_s) << '\n';
    return out.str();
}

}  // namespace hetpath
