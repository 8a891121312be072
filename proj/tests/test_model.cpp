#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "hetpath/core.hpp"
#include "hetpath/csv.hpp"
#include "hetpath/model.hpp"

using namespace hetpath;

namespace {

Scenario two_link_scenario() {
    Scenario s;
    s.paths.links = {{1e6, 0.010}, {1e6, 0.020}};
    return s;
}

Scenario random_scenario(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> bw(5e4, 5e7);
    std::uniform_real_distribution<double> delay(0.001, 0.3);
    Scenario s;
    for (int i = 0; i < n; ++i)
        s.paths.links.push_back({bw(rng), delay(rng)});
    return s;
}

}  // namespace

TEST_CASE("round-robin pointer carries across rounds") {
    CHECK(link_index(1, 3, 0) == 1);
    CHECK(link_index(2, 3, 0) == 2);
    CHECK(link_index(3, 3, 0) == 3);
    CHECK(link_index(4, 3, 0) == 1);
    CHECK(link_index(1, 3, 2) == 3);  // two segments already dispatched
    CHECK(link_index(1, 1, 17) == 1);
    CHECK_THROWS_AS(link_index(0, 3, 0), std::domain_error);
    CHECK_THROWS_AS(link_index(1, 0, 0), std::domain_error);
}

TEST_CASE("segment delay = queue-inflated serialization plus propagation") {
    const Scenario s = two_link_scenario();  // 536 B / 1 Mbit/s = 4.288 ms
    const RoundContext ctx = make_round_context(s, 1, 4.0, 4.0, 0.0);
    CHECK(segment_delay(ctx, 1) == doctest::Approx(0.014288).epsilon(1e-12));
    // third segment of the round wraps back to link 1 behind the first
    CHECK(segment_delay(ctx, 3) == doctest::Approx(0.018576).epsilon(1e-12));

    const RoundContext shifted = make_round_context(s, 2, 4.0, 4.0, 1.0);
    CHECK(segment_delay(shifted, 1) ==
          doctest::Approx(0.024288).epsilon(1e-12));
}

TEST_CASE("batch rounding clamps to at least one segment") {
    const Scenario s = two_link_scenario();
    CHECK(make_round_context(s, 1, 0.4, 1.0, 0.0).batch_int == 1);
    CHECK(make_round_context(s, 1, 2.5, 3.0, 0.0).batch_int == 3);
    CHECK(make_round_context(s, 1, 2.49, 3.0, 0.0).batch_int == 2);
    CHECK_THROWS_AS(make_round_context(s, 0, 1.0, 1.0, 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(make_round_context(s, 1, -1.0, 1.0, 0.0),
                    std::domain_error);
}

TEST_CASE("two-segment batch averages the two head-arrival cases") {
    // With C=2 both cases ack both segments; only the wait differs, so the
    // expectation sits midway between D1 and D2.
    const Scenario s = two_link_scenario();
    const RoundContext ctx = make_round_context(s, 1, 2.0, 2.0, 0.0);
    const RoundOutcome out = expected_round(ctx);
    const double d1 = segment_delay(ctx, 1);
    const double d2 = segment_delay(ctx, 2);
    CHECK(out.expected_duration_s ==
          doctest::Approx((d1 + d2) / 2.0).epsilon(1e-12));
    CHECK(out.expected_acked == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single link cannot reorder: ack at the delayed-ack threshold") {
    Scenario s;
    s.paths.links = {{1e6, 0.010}};
    const RoundContext ctx = make_round_context(s, 1, 4.0, 4.0, 0.0);
    const RoundOutcome out = expected_round(ctx);
    CHECK(out.expected_acked == doctest::Approx(2.0));  // m_ack = 2
    CHECK(out.expected_duration_s ==
          doctest::Approx(segment_delay(ctx, 2)).epsilon(1e-12));

    // a batch smaller than the threshold acks at the batch end
    Scenario s1 = s;
    s1.config.m_ack = 5;
    const RoundContext small = make_round_context(s1, 1, 3.0, 3.0, 0.0);
    CHECK(expected_round(small).expected_acked == doctest::Approx(3.0));
}

TEST_CASE("single-segment batch is deterministic") {
    const Scenario s = two_link_scenario();
    const RoundContext ctx = make_round_context(s, 1, 1.0, 1.0, 0.0);
    const RoundOutcome out = expected_round(ctx);
    CHECK(out.expected_acked == doctest::Approx(1.0));
    CHECK(out.expected_duration_s ==
          doctest::Approx(segment_delay(ctx, 1)).epsilon(1e-12));
}

TEST_CASE("direct and gap-sum duration routes agree on random contexts") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> links(1, 8);
    std::uniform_int_distribution<int> batch(1, 40);
    std::uniform_int_distribution<int> m_ack(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        Scenario s = random_scenario(rng, links(rng));
        s.config.m_ack = m_ack(rng);
        const double c = static_cast<double>(batch(rng));
        const RoundContext ctx =
            make_round_context(s, 1, c, c, static_cast<double>(trial % 7));
        const double direct = expected_round(ctx).expected_duration_s;
        const double rearranged = expected_duration_rearranged(ctx);
        CHECK(std::fabs(direct - rearranged) <=
              1e-9 * std::max(std::fabs(direct), std::fabs(rearranged)));
    }
}

TEST_CASE("gap decomposition equals the direct delay difference for n >= 2") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> links(2, 8);
    for (int trial = 0; trial < 200; ++trial) {
        const Scenario s = random_scenario(rng, links(rng));
        const RoundContext ctx = make_round_context(
            s, 1, 12.0, 12.0, static_cast<double>(trial % 5));
        for (int64_t k = 1; k <= 12; ++k) {
            const double direct =
                segment_delay(ctx, k) - segment_delay(ctx, 1);
            CHECK(delay_gap(ctx, k) ==
                  doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("window recurrences switch from slow start to linear growth") {
    ModelConfig cfg;  // defaults: init 1, ssthresh 122
    const int64_t ss = slow_start_rounds(cfg);
    CHECK(ss == 121);
    CHECK(next_window(5.0, 3, ss) == doctest::Approx(6.0));
    CHECK(next_window(10.0, ss, ss) == doctest::Approx(10.1));
    CHECK(next_batch(4.2, 5.0, 3, ss) == doctest::Approx(5.2));
    CHECK(next_batch(4.2, 5.0, ss + 1, ss) == doctest::Approx(4.4));
}

TEST_CASE("single-segment transfer completes in one round") {
    Scenario s;
    s.paths.links = {{1e6, 0.010}};
    s.config.transfer_bytes = 536;
    const ThroughputReport rep = run_model(s);
    REQUIRE(rep.rounds.size() == 1);
    // n=1 serialization counts the self slot twice per the dispatch formula
    CHECK(rep.total_time_s == doctest::Approx(0.018576).epsilon(1e-12));
    CHECK(rep.avg_throughput_bps ==
          doctest::Approx(536.0 * 8.0 / 0.018576).epsilon(1e-12));
    CHECK(rep.total_segments == doctest::Approx(1.0));
}

TEST_CASE("three-segment transfer grows the batch through slow start") {
    Scenario s;
    s.paths.links = {{1e6, 0.010}};
    s.config.transfer_bytes = 3 * 536;
    const ThroughputReport rep = run_model(s);
    REQUIRE(rep.rounds.size() == 2);
    CHECK(rep.rounds[0].batch == doctest::Approx(1.0));
    CHECK(rep.rounds[1].batch == doctest::Approx(2.0));
    CHECK(rep.rounds[0].expected_duration_s ==
          doctest::Approx(0.018576).epsilon(1e-12));
    CHECK(rep.rounds[1].expected_duration_s ==
          doctest::Approx(0.022864).epsilon(1e-12));
    CHECK(rep.total_time_s == doctest::Approx(0.04144).epsilon(1e-12));
    CHECK(rep.total_segments == doctest::Approx(3.0));
}

TEST_CASE("model run respects the round cap") {
    Scenario s = two_link_scenario();
    s.config.transfer_bytes = 1'000'000'000;
    CHECK_THROWS_AS(run_model(s, 3), std::runtime_error);
}

TEST_CASE("longer transfers take longer, larger batches finish sooner") {
    Scenario a = two_link_scenario();
    a.config.transfer_bytes = 64 * 1024;
    Scenario b = two_link_scenario();
    b.config.transfer_bytes = 256 * 1024;
    CHECK(run_model(a).total_time_s < run_model(b).total_time_s);
}

TEST_CASE("report CSV carries full-precision values and a summary row") {
    Scenario s = two_link_scenario();
    s.config.transfer_bytes = 20000;
    const ThroughputReport rep = run_model(s);
    const auto rows = parse_csv_text(report_to_csv(rep));
    REQUIRE(rows.size() == rep.rounds.size() + 2);  // header + rounds + summary
    CHECK(rows[0][0] == "round");
    REQUIRE(rows[1].size() == 7);
    CHECK(std::stod(rows[1][3]) == rep.rounds[0].expected_duration_s);
    const auto& summary = rows.back();
    CHECK(summary[0] == "summary");
    CHECK(std::stoll(summary[5]) == rep.transfer_bytes);
    CHECK(std::stod(summary[6]) == rep.total_time_s);
}
