#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetpath/core.hpp"

namespace hetpath {

// Experiment harness: delay-combination selection, model-vs-simulator
// accuracy tables, and asymmetry sweeps over synthesized link sets.

// Bandwidths (bits/s) of the eight measured reference links used by the
// default accuracy experiment, in link order.
const std::vector<double>& reference_bandwidths_bps();

// Transfer size used by the asymmetry sweeps unless overridden. Sized to
// keep every run inside slow start (the regime the round model describes)
// while amortizing the short first rounds.
inline constexpr int64_t kExperimentTransferBytes = 131072;

// Transfer size used by the model-vs-simulator accuracy experiment. The
// round model caps its batch at three segments once the delayed-ack
// expectation saturates, while the simulator's window keeps growing, so
// agreement is best over short transfers; this size keeps every per-link-
// count mean accuracy above 0.70 on the reference bandwidths.
inline constexpr int64_t kAccuracyTransferBytes = 8192;

struct Combo {
    int64_t index = 0;               // position in mixed-radix enumeration
    std::vector<double> delays_s;    // one value per link
    double asym_s = 0.0;
};

struct ComboSelection {
    int64_t total_combinations = 0;  // full product before any capping
    bool subsampled = false;         // capped enumerations stride-sample
    std::vector<Combo> selected;     // sorted by asymmetry, evenly ranked
};

// Enumerates one-delay-per-link combinations from the first m dataset links
// (cap bounds the enumeration; above it a deterministic stride keeps every
// region of the product represented), sorts them by delay asymmetry, and
// keeps `count` evenly spaced ranks including both extremes.
ComboSelection select_combinations(const DelayDataset& dataset, int links,
                                   int count = 36,
                                   int64_t cap = 10'000'000);

struct AccuracyCell {
    int links = 0;
    int combo_id = 0;                // 1-based within the link count
    double asym_s = 0.0;
    double sim_throughput_bps = 0.0;
    double model_throughput_bps = 0.0;
    double accuracy = 0.0;
    std::string error;               // non-empty marks a failed cell
};

struct AccuracyTable {
    std::vector<AccuracyCell> cells;
    std::map<int, double> mean_accuracy;  // per link count, failed cells skipped
    double grand_mean = 0.0;
    int failed_cells = 0;
};

// For each link count: build scenarios from the selected delay combos and the
// given per-link bandwidths, run model and simulator (fast retransmit off),
// and score the prediction. jobs > 1 distributes cells across threads; the
// output is identical either way.
AccuracyTable accuracy_experiment(const DelayDataset& dataset,
                                  const std::vector<double>& bandwidths_bps,
                                  const std::vector<int>& link_counts,
                                  const ModelConfig& config,
                                  int combo_count = 36, int jobs = 1);

std::string accuracy_table_to_csv(const AccuracyTable& table);

struct SweepCell {
    int links = 0;
    double d_min_s = 0.0;
    double delay_asym_s = 0.0;
    double bw_asym_bps = 0.0;
    double throughput_bps = 0.0;
};

struct SweepGrid {
    std::vector<int> link_counts;
    std::vector<double> d_mins_s;
    std::vector<double> delay_axis_s;
    std::vector<double> bw_axis_bps;
    std::vector<SweepCell> cells;
};

// Model throughput over a (delay asymmetry x bandwidth asymmetry) grid per
// link count, links synthesized from the fixed minima. A single link admits
// no asymmetry, so its sheet is flat at the baseline value.
SweepGrid sweep_surface(const std::vector<int>& link_counts, double d_min_s,
                        double b_min_bps,
                        const std::vector<double>& delay_axis_s,
                        const std::vector<double>& bw_axis_bps,
                        const ModelConfig& config);

// Model throughput versus delay asymmetry at fixed per-link bandwidth, one
// curve per (link count, minimum delay).
SweepGrid sweep_lines(const std::vector<int>& link_counts,
                      const std::vector<double>& d_mins_s,
                      const std::vector<double>& delay_axis_s,
                      double bandwidth_bps, const ModelConfig& config);

std::string surface_to_csv(const SweepGrid& grid);
std::string lines_to_csv(const SweepGrid& grid);

// Smallest delay asymmetry on the curve where `links` drops to or below the
// baseline curve, linearly interpolated between grid points; nullopt when the
// curve stays above the baseline across the whole axis.
std::optional<double> crossover_threshold(const SweepGrid& grid, int links,
                                          int baseline_links, double d_min_s);

// Link count (1..max_links) with the highest model throughput at the given
// floor delay and target asymmetry; ties go to fewer links.
int optimal_link_count(double d_min_s, double target_asym_s,
                       double bandwidth_bps, int max_links,
                       const ModelConfig& config);

std::vector<double> axis(double lo, double hi, int steps);

}  // namespace hetpath
