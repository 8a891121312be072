#include "hetpath/reorder_prob.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hetpath {

namespace {

constexpr int kBruteForceMaxBatch = 9;  // 8! orderings; enough to pin C<=9

void check_batch(int batch, int lower) {
    if (batch < lower)
        throw std::domain_error("batch must be >= " + std::to_string(lower));
}

void check_m_ack(int m_ack) {
    if (m_ack < 1) throw std::domain_error("m_ack must be >= 1");
}

void check_enumerable(int batch) {
    if (batch > kBruteForceMaxBatch)
        throw std::length_error("brute-force enumeration capped at batch 9");
}

}  // namespace

double p_first(int batch) {
    check_batch(batch, 1);
    return 1.0 / batch;
}

double QDistribution::total_mass() const {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

double QDistribution::mean() const {
    double m = 0.0;
    for (size_t i = 0; i < p.size(); ++i) m += static_cast<double>(i + 1) * p[i];
    return m;
}

MDistribution m_distribution(int batch, int m_ack) {
    check_batch(batch, 2);
    check_m_ack(m_ack);
    MDistribution d;
    d.batch = batch;
    d.m_ack = m_ack;
    d.p_exact.assign(m_ack - 1, 0.0);
    // P(m == k) = (C-k-1) / ((C-1)(C-2)...(C-k)): prefix 2..k fixed in order,
    // next arrival anything but k+1. Nonzero only up to k = C-2.
    double taken = 0.0;
    int top = std::min(m_ack - 1, batch - 2);
    for (int k = 1; k <= top; ++k) {
        double r = static_cast<double>(batch - k - 1);
        for (int t = 0; t < k; ++t) r /= static_cast<double>(batch - 1 - t);
        d.p_exact[k - 1] = r;
        taken += r;
    }
    d.p_tail = 1.0 - taken;
    return d;
}

QDistribution q_distribution(int batch) {
    check_batch(batch, 2);
    QDistribution d;
    d.batch = batch;
    d.p.assign(batch, 0.0);
    const double C = batch;
    d.p[0] = (C - 2.0) / (2.0 * (C - 1.0));
    for (int k = 2; k < batch; ++k)
        d.p[k - 1] = C / (static_cast<double>(k) * (k + 1.0) * (C - 1.0));
    d.p[batch - 1] = 1.0 / (C - 1.0);
    return d;
}

QDistribution q_distribution_uncorrected(int batch) {
    check_batch(batch, 2);
    QDistribution d;
    d.batch = batch;
    d.p.assign(batch, 0.0);
    const double C = batch;
    d.p[0] = (C - 2.0) / (2.0 * (C - 1.0));
    d.p[batch - 1] = 1.0 / (C - 1.0);
    // middle branch, normalized by (C-1)! as it goes so nothing overflows:
    //   (C-k-1) * sum_{l=k+1}^{C} (l-2)!/(l-k-1)! * (C-l+1) / (C! - (C-1)!)
    for (int k = 2; k < batch; ++k) {
        if (batch - k - 1 <= 0) continue;  // the misprinted factor zeroes k = C-1
        double h = 1.0;  // (l-2)!/(l-k-1)! / (C-1)!, starting at l = k+1
        for (int j = k; j <= batch - 1; ++j) h /= static_cast<double>(j);
        double sum = 0.0;
        for (int l = k + 1; l <= batch; ++l) {
            sum += h * static_cast<double>(batch - l + 1);
            h *= static_cast<double>(l - 1) / static_cast<double>(l - k);
        }
        d.p[k - 1] = (C - k - 1.0) * sum / (C - 1.0);
    }
    return d;
}

MDistribution brute_force_m_distribution(int batch, int m_ack) {
    check_batch(batch, 2);
    check_m_ack(m_ack);
    check_enumerable(batch);
    MDistribution d;
    d.batch = batch;
    d.m_ack = m_ack;
    d.p_exact.assign(m_ack - 1, 0.0);
    d.p_tail = 0.0;

    // arrival orders of segments 2..C after the head arrived first
    std::vector<int> perm(batch - 1);
    std::iota(perm.begin(), perm.end(), 2);
    int64_t total = 0;
    const int tail_at = std::min(m_ack, batch);
    do {
        int m = 1;
        while (m - 1 < static_cast<int>(perm.size()) && perm[m - 1] == m + 1) ++m;
        if (m >= tail_at)
            d.p_tail += 1.0;
        else
            d.p_exact[m - 1] += 1.0;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (double& p : d.p_exact) p /= static_cast<double>(total);
    d.p_tail /= static_cast<double>(total);
    return d;
}

QDistribution brute_force_q_distribution(int batch) {
    check_batch(batch, 2);
    check_enumerable(batch);
    QDistribution d;
    d.batch = batch;
    d.p.assign(batch, 0.0);

    std::vector<int> perm(batch);
    std::iota(perm.begin(), perm.end(), 1);
    int64_t total = 0;
    do {
        if (perm[0] == 1) continue;  // conditioned on the head not first
        std::vector<bool> before(batch + 2, false);
        for (int i = 0; perm[i] != 1; ++i) before[perm[i]] = true;
        int q = 1;
        while (q + 1 <= batch && before[q + 1]) ++q;
        d.p[q - 1] += 1.0;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (double& p : d.p) p /= static_cast<double>(total);
    return d;
}

}  // namespace hetpath
