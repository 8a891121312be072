#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hetpath/reorder_prob.hpp"

using namespace hetpath;

namespace {

double mass(const MDistribution& d) {
    double s = d.p_tail;
    for (double p : d.p_exact) s += p;
    return s;
}

// Independent tail route: P(all in order) + sum over prefix lengths from the
// ack threshold up, each term (C-k-1)*(C-k-1)!/(C-1)!. Factorials are fine
// here because this check only runs at small C.
double tail_by_direct_sum(int C, int m_ack) {
    auto fact = [](int x) {
        double f = 1.0;
        for (int i = 2; i <= x; ++i) f *= i;
        return f;
    };
    if (m_ack >= C) {
        // fewer than m_ack segments: tail is the all-in-order mass
        return 1.0 / fact(C - 1);
    }
    double t = 1.0 / fact(C - 1);
    for (int k = m_ack; k <= C - 2; ++k)
        t += (C - k - 1) * fact(C - k - 1) / fact(C - 1);
    return t;
}

}  // namespace

TEST_CASE("first-arrival probability") {
    CHECK(p_first(1) == doctest::Approx(1.0));
    CHECK(p_first(4) == doctest::Approx(0.25));
    CHECK_THROWS_AS(p_first(0), std::domain_error);
}

TEST_CASE("in-order prefix distribution: frozen hand values") {
    // C=4, m_ack=2: prefix stops at 1 iff the arrival after the head is not
    // segment 2: 2/3 of the 3! orderings.
    auto d42 = m_distribution(4, 2);
    REQUIRE(d42.p_exact.size() == 1);
    CHECK(d42.p_exact[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(d42.p_tail == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(d42.tail_length() == 2);

    auto d32 = m_distribution(3, 2);
    CHECK(d32.p_exact[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d32.p_tail == doctest::Approx(0.5).epsilon(1e-14));

    // batch of 2 with m_ack=3: the single ordering lands in the tail bucket,
    // which then means "both segments".
    auto d23 = m_distribution(2, 3);
    CHECK(d23.p_exact[0] == 0.0);
    CHECK(d23.p_exact[1] == 0.0);
    CHECK(d23.p_tail == doctest::Approx(1.0));
    CHECK(d23.tail_length() == 2);

    // m_ack=1: always tail, ack after one segment.
    auto d51 = m_distribution(5, 1);
    CHECK(d51.p_exact.empty());
    CHECK(d51.p_tail == doctest::Approx(1.0));
    CHECK(d51.tail_length() == 1);
}

TEST_CASE("ack-coverage distribution: frozen hand values") {
    auto q3 = q_distribution(3);
    REQUIRE(q3.p.size() == 3);
    CHECK(q3.p[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(q3.p[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(q3.p[2] == doctest::Approx(0.5).epsilon(1e-14));

    auto q4 = q_distribution(4);
    CHECK(q4.p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(q4.p[1] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(q4.p[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(q4.p[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // smallest batch: the head was not first, so the other segment already
    // arrived and the ack always covers both.
    auto q2 = q_distribution(2);
    CHECK(q2.p[0] == 0.0);
    CHECK(q2.p[1] == doctest::Approx(1.0));
}

TEST_CASE("closed forms match the permutation oracles") {
    for (int C = 2; C <= 9; ++C) {
        auto qc = q_distribution(C);
        auto qb = brute_force_q_distribution(C);
        REQUIRE(qc.p.size() == qb.p.size());
        for (size_t i = 0; i < qc.p.size(); ++i)
            CHECK(std::abs(qc.p[i] - qb.p[i]) < 1e-12);

        for (int m_ack = 1; m_ack <= 4; ++m_ack) {
            auto mc = m_distribution(C, m_ack);
            auto mb = brute_force_m_distribution(C, m_ack);
            REQUIRE(mc.p_exact.size() == mb.p_exact.size());
            for (size_t i = 0; i < mc.p_exact.size(); ++i)
                CHECK(std::abs(mc.p_exact[i] - mb.p_exact[i]) < 1e-12);
            CHECK(std::abs(mc.p_tail - mb.p_tail) < 1e-12);
        }
    }
}

TEST_CASE("distributions are normalized") {
    for (int C = 2; C <= 9; ++C) {
        CHECK(q_distribution(C).total_mass() == doctest::Approx(1.0).epsilon(1e-13));
        for (int m_ack = 1; m_ack <= 6; ++m_ack)
            CHECK(mass(m_distribution(C, m_ack)) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("tail bucket equals the direct factorial sum") {
    for (int C = 2; C <= 12; ++C)
        for (int m_ack = 1; m_ack <= 5; ++m_ack)
            CHECK(m_distribution(C, m_ack).p_tail ==
                  doctest::Approx(tail_by_direct_sum(C, m_ack)).epsilon(1e-12));
}

TEST_CASE("large batches evaluate without overflow") {
    const int C = 10'000;
    auto m = m_distribution(C, 4);
    for (double p : m.p_exact) {
        CHECK(std::isfinite(p));
        CHECK(p >= 0.0);
    }
    CHECK(std::isfinite(m.p_tail));
    CHECK(mass(m) == doctest::Approx(1.0).epsilon(1e-12));

    auto q = q_distribution(C);
    CHECK(std::isfinite(q.p.front()));
    CHECK(std::isfinite(q.p.back()));
    CHECK(q.total_mass() == doctest::Approx(1.0).epsilon(1e-11));

    // coverage mean grows roughly like the harmonic number; just pin range
    double mean = q.mean();
    CHECK(mean > 1.0);
    CHECK(mean < C);
}

TEST_CASE("uncorrected piecewise form: known agreements and known deficit") {
    // exact at the edges and at k in {C-2, C-3}; zero at k = C-1
    for (int C = 3; C <= 9; ++C) {
        auto u = q_distribution_uncorrected(C);
        auto t = q_distribution(C);
        CHECK(std::abs(u.p[0] - t.p[0]) < 1e-12);
        CHECK(std::abs(u.p[C - 1] - t.p[C - 1]) < 1e-12);
        CHECK(u.p[C - 2] == 0.0);
        if (C >= 4) CHECK(std::abs(u.p[C - 3] - t.p[C - 3]) < 1e-12);
        if (C >= 5) CHECK(std::abs(u.p[C - 4] - t.p[C - 4]) < 1e-12);
    }

    // frozen C=3 values: {1/4, 0, 1/2}, total mass 3/4
    auto u3 = q_distribution_uncorrected(3);
    CHECK(u3.p[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(u3.p[1] == 0.0);
    CHECK(u3.p[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u3.total_mass() == doctest::Approx(0.75).epsilon(1e-14));

    // the missing mass equals p(q = C-1) only while C <= 5; beyond that the
    // misprinted middle factor undersizes small-k entries too
    for (int C = 3; C <= 5; ++C) {
        double deficit = 1.0 - q_distribution_uncorrected(C).total_mass();
        CHECK(deficit == doctest::Approx(q_distribution(C).p[C - 2]).epsilon(1e-12));
    }
    for (int C = 6; C <= 9; ++C) {
        double deficit = 1.0 - q_distribution_uncorrected(C).total_mass();
        CHECK(deficit > q_distribution(C).p[C - 2] + 1e-6);
    }
}

TEST_CASE("argument guards") {
    CHECK_THROWS_AS(m_distribution(1, 2), std::domain_error);
    CHECK_THROWS_AS(q_distribution(1), std::domain_error);
    CHECK_THROWS_AS(m_distribution(3, 0), std::domain_error);
    CHECK_THROWS_AS(brute_force_q_distribution(10), std::length_error);
    CHECK_THROWS_AS(brute_force_m_distribution(10, 2), std::length_error);
    CHECK_THROWS_AS(brute_force_q_distribution(1), std::domain_error);
}
