#pragma once

#include <span>
#include <vector>

#include "hetpath/core.hpp"

namespace hetpath {

// Heterogeneity metrics: mean absolute pairwise difference across links,
// 2/(n(n-1)) * sum over unordered pairs. Zero for a single link.
double avg_delay_asymmetry(std::span<const double> delays_s);
double avg_bandwidth_asymmetry(std::span<const double> bandwidths_bps);

struct AsymmetrySummary {
    double delay_asym_s = 0.0;
    double bandwidth_asym_bps = 0.0;
};

AsymmetrySummary summarize_asymmetry(const PathSet& paths);

// Relative agreement of a model prediction with a simulated reference:
// 1 - |sim - model| / sim. At most 1; unbounded below (a wildly off model
// goes negative on purpose).
double prediction_accuracy(double sim_throughput, double model_throughput);

// Arithmetic progressions hitting an exact target asymmetry: values
// min + k*step for k = 0..n-1 with step = 3*target/(n+1), which inverts the
// mean-pairwise-gap identity asym = step*(n+1)/3. For n == 1 the target must
// be zero.
std::vector<double> synth_delays(int n, double d_min_s, double target_asym_s);
std::vector<double> synth_bandwidths(int n, double b_min_bps,
                                     double target_asym_bps);

}  // namespace hetpath
