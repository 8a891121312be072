#pragma once

#include <vector>

namespace hetpath {

// Distributions over what the first cumulative ACK of a round acknowledges,
// under the uniform-reordering approximation: a round's batch of C segments
// arrives at the receiver in a uniformly random order.
//
// Two cases, split on whether the head segment of the batch arrives first:
//  - head first ("in-order start"): m = length of the in-order prefix before
//    the first out-of-order arrival; the receiver ACKs after m_ack in-order
//    segments or at the first out-of-order arrival, whichever comes first.
//  - head not first: q = segments covered by the ACK fired when the head
//    finally lands and merges with the buffered run 2,3,... behind it.

// Probability that the head segment arrives first (approximated as 1/C).
double p_first(int batch);

struct MDistribution {
    int batch = 0;
    int m_ack = 1;
    // p_exact[k-1] = P(m == k) for k = 1..m_ack-1; entries for k >= batch-1
    // are structurally zero.
    std::vector<double> p_exact;
    // P(m >= min(m_ack, batch)): the receiver ACKs min(m_ack, batch) segments.
    // For batches smaller than m_ack this is the "whole batch in order" mass,
    // since fewer than m_ack segments exist.
    double p_tail = 0.0;

    int tail_length() const { return m_ack < batch ? m_ack : batch; }
};

struct QDistribution {
    int batch = 0;
    std::vector<double> p;  // p[k-1] = P(q == k), k = 1..batch

    double total_mass() const;
    double mean() const;
};

// Closed forms, evaluated with running products (no factorial literals), so
// they stay finite for batches up to at least 10'000.
MDistribution m_distribution(int batch, int m_ack);
QDistribution q_distribution(int batch);

// The uncorrected piecewise form of the q distribution as published: its
// middle branch carries a plain (C-k-1) factor where the derivation requires
// (C-k-1)!, so p(q = C-1) vanishes and, for C >= 6, entries k <= C-4 are
// undersized as well. Kept so the deficit against q_distribution can be
// reported; do not use for predictions.
QDistribution q_distribution_uncorrected(int batch);

// Exhaustive permutation oracles (batch <= 9). These enumerate arrival orders
// directly and exist to pin the closed forms down in tests and diagnostics.
MDistribution brute_force_m_distribution(int batch, int m_ack);
QDistribution brute_force_q_distribution(int batch);

}  // namespace hetpath
