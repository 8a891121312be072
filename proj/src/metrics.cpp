#include "hetpath/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hetpath {

namespace {

double avg_pairwise_abs_diff(std::span<const double> values) {
    const size_t n = values.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            sum += std::fabs(values[i] - values[j]);
    return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

void check_progression_args(int n, double minimum, double target,
                            const char* what) {
    if (n < 1)
        throw std::invalid_argument(std::string(what) +
                                    " progression needs at least one link");
    if (!std::isfinite(minimum) || minimum <= 0.0)
        throw std::invalid_argument(std::string(what) +
                                    " progression minimum must be positive");
    if (!std::isfinite(target) || target < 0.0)
        throw std::invalid_argument(std::string(what) +
                                    " progression target must be >= 0");
    if (n == 1 && target != 0.0)
        throw std::invalid_argument(
            std::string(what) +
            " progression with one link can only hit a zero target");
}

// Evenly spaced values produce a mean pairwise gap of step*(n+1)/3, so the
// step that realizes a requested gap is 3*target/(n+1).
std::vector<double> arithmetic_progression(int n, double minimum,
                                           double target) {
    const double step = 3.0 * target / static_cast<double>(n + 1);
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = minimum + i * step;
    return out;
}

}  // namespace

double avg_delay_asymmetry(std::span<const double> delays_s) {
    return avg_pairwise_abs_diff(delays_s);
}

double avg_bandwidth_asymmetry(std::span<const double> bandwidths_bps) {
    return avg_pairwise_abs_diff(bandwidths_bps);
}

AsymmetrySummary summarize_asymmetry(const PathSet& paths) {
    std::vector<double> delays, bandwidths;
    delays.reserve(paths.links.size());
    bandwidths.reserve(paths.links.size());
    for (const Link& l : paths.links) {
        delays.push_back(l.delay_s);
        bandwidths.push_back(l.bandwidth_bps);
    }
    return {avg_delay_asymmetry(delays), avg_bandwidth_asymmetry(bandwidths)};
}

double prediction_accuracy(double simulated, double modeled) {
    if (!std::isfinite(simulated) || simulated <= 0.0)
        throw std::domain_error("accuracy reference value must be positive");
    if (!std::isfinite(modeled))
        throw std::domain_error("modeled value must be finite");
    return 1.0 - std::fabs(simulated - modeled) / simulated;
}

std::vector<double> synth_delays(int n, double min_delay_s,
                                 double target_asymmetry_s) {
    check_progression_args(n, min_delay_s, target_asymmetry_s, "delay");
    return arithmetic_progression(n, min_delay_s, target_asymmetry_s);
}

std::vector<double> synth_bandwidths(int n, double min_bandwidth_bps,
                                     double target_asymmetry_bps) {
    check_progression_args(n, min_bandwidth_bps, target_asymmetry_bps,
                           "bandwidth");
    return arithmetic_progression(n, min_bandwidth_bps, target_asymmetry_bps);
}

}  // namespace hetpath
