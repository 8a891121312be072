#include "hetpath/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hetpath/csv.hpp"
#include "hetpath/metrics.hpp"
#include "hetpath/model.hpp"
#include "hetpath/simulator.hpp"
#include "hetpath/units.hpp"

namespace hetpath {

const std::vector<double>& reference_bandwidths_bps() {
    static const std::vector<double> bw = [] {
        const double mbps[] = {35.9, 18.4, 33.3, 14.7, 14.8, 4.4, 22.5, 12.5};
        std::vector<double> v;
        v.reserve(std::size(mbps));
        for (double b : mbps) v.push_back(mbps_to_bps(b));
        return v;
    }();
    return bw;
}

namespace {

Scenario make_scenario(const std::vector<double>& delays_s,
                       const std::vector<double>& bandwidths_bps,
                       const ModelConfig& config, std::string label) {
    if (delays_s.size() != bandwidths_bps.size())
        throw std::invalid_argument(
            "delay and bandwidth lists must have the same length");
    Scenario s;
    s.label = std::move(label);
    s.config = config;
    s.paths.links.reserve(delays_s.size());
    for (size_t i = 0; i < delays_s.size(); ++i)
        s.paths.links.push_back({bandwidths_bps[i], delays_s[i]});
    return s;
}

}  // namespace

ComboSelection select_combinations(const DelayDataset& dataset, int links,
                                   int count, int64_t cap) {
    if (links < 1 || links > dataset.link_count())
        throw std::invalid_argument(
            "link count outside the dataset's " +
            std::to_string(dataset.link_count()) + " links");
    if (count < 1) throw std::invalid_argument("combination count must be >= 1");
    if (cap < 1) throw std::invalid_argument("enumeration cap must be >= 1");
    for (int i = 0; i < links; ++i)
        if (dataset.values_s[static_cast<size_t>(i)].empty())
            throw std::invalid_argument("link " + dataset.labels[static_cast<size_t>(i)] +
                                        " has no delay values");

    // mixed-radix enumeration over one delay per link; 128-bit keeps the
    // product exact even for absurdly large datasets
    unsigned __int128 total = 1;
    for (int i = 0; i < links; ++i)
        total *= dataset.values_s[static_cast<size_t>(i)].size();
    const unsigned __int128 stride =
        total > static_cast<unsigned __int128>(cap)
            ? (total + static_cast<unsigned __int128>(cap) - 1) /
                  static_cast<unsigned __int128>(cap)
            : 1;

    ComboSelection sel;
    sel.total_combinations =
        total > static_cast<unsigned __int128>(INT64_MAX)
            ? INT64_MAX
            : static_cast<int64_t>(total);
    sel.subsampled = stride > 1;

    std::vector<Combo> combos;
    for (unsigned __int128 idx = 0; idx < total; idx += stride) {
        Combo c;
        c.index = static_cast<int64_t>(idx % (unsigned __int128)INT64_MAX);
        c.delays_s.resize(static_cast<size_t>(links));
        unsigned __int128 rest = idx;
        for (int i = 0; i < links; ++i) {
            const auto& values = dataset.values_s[static_cast<size_t>(i)];
            c.delays_s[static_cast<size_t>(i)] =
                values[static_cast<size_t>(rest % values.size())];
            rest /= values.size();
        }
        c.asym_s = avg_delay_asymmetry(c.delays_s);
        combos.push_back(std::move(c));
    }

    std::sort(combos.begin(), combos.end(), [](const Combo& a, const Combo& b) {
        if (a.asym_s != b.asym_s) return a.asym_s < b.asym_s;
        return a.index < b.index;
    });

    const int64_t available = static_cast<int64_t>(combos.size());
    if (available <= count) {
        sel.selected = std::move(combos);
        return sel;
    }
    // evenly spaced ranks across the sorted list, both extremes included
    sel.selected.reserve(static_cast<size_t>(count));
    if (count == 1) {
        sel.selected.push_back(combos[static_cast<size_t>((available - 1) / 2)]);
        return sel;
    }
    for (int i = 0; i < count; ++i) {
        const int64_t rank = static_cast<int64_t>(std::llround(
            static_cast<double>(i) * static_cast<double>(available - 1) /
            static_cast<double>(count - 1)));
        sel.selected.push_back(combos[static_cast<size_t>(rank)]);
    }
    return sel;
}

AccuracyTable accuracy_experiment(const DelayDataset& dataset,
                                  const std::vector<double>& bandwidths_bps,
                                  const std::vector<int>& link_counts,
                                  const ModelConfig& config, int combo_count,
                                  int jobs) {
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    if (link_counts.empty())
        throw std::invalid_argument("at least one link count is required");

    struct Task {
        int links;
        int combo_id;
        Combo combo;
    };
    std::vector<Task> tasks;
    for (int m : link_counts) {
        if (m > static_cast<int>(bandwidths_bps.size()))
            throw std::invalid_argument(
                "link count " + std::to_string(m) + " exceeds the " +
                std::to_string(bandwidths_bps.size()) + " known bandwidths");
        ComboSelection sel = select_combinations(dataset, m, combo_count);
        int id = 0;
        for (Combo& c : sel.selected)
            tasks.push_back({m, ++id, std::move(c)});
    }

    std::vector<AccuracyCell> cells(tasks.size());
    const auto run_task = [&](size_t t) {
        const Task& task = tasks[t];
        AccuracyCell& cell = cells[t];
        cell.links = task.links;
        cell.combo_id = task.combo_id;
        cell.asym_s = task.combo.asym_s;
        try {
            std::vector<double> bw(bandwidths_bps.begin(),
                                   bandwidths_bps.begin() + task.links);
            const Scenario scenario =
                make_scenario(task.combo.delays_s, bw, config,
                              "links=" + std::to_string(task.links) +
                                  " combo=" + std::to_string(task.combo_id));
            cell.model_throughput_bps = run_model(scenario).avg_throughput_bps;
            cell.sim_throughput_bps = run_sim(scenario).throughput_bps;
            cell.accuracy = prediction_accuracy(cell.sim_throughput_bps,
                                                cell.model_throughput_bps);
        } catch (const std::exception& e) {
            // a broken cell is recorded, not fatal: the rest of the table
            // still carries information
            cell.error = e.what();
        }
    };

    if (jobs == 1) {
        for (size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        const int worker_count =
            std::min<int>(jobs, static_cast<int>(tasks.size()));
        workers.reserve(static_cast<size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w)
            workers.emplace_back([&] {
                for (size_t t = next.fetch_add(1); t < tasks.size();
                     t = next.fetch_add(1))
                    run_task(t);
            });
        for (std::thread& w : workers) w.join();
    }

    AccuracyTable table;
    table.cells = std::move(cells);
    std::map<int, std::pair<double, int64_t>> sums;
    double grand = 0.0;
    int64_t scored = 0;
    for (const AccuracyCell& c : table.cells) {
        if (!c.error.empty()) {
            ++table.failed_cells;
            continue;
        }
        auto& [sum, cnt] = sums[c.links];
        sum += c.accuracy;
        ++cnt;
        grand += c.accuracy;
        ++scored;
    }
    for (const auto& [m, sc] : sums)
        table.mean_accuracy[m] = sc.first / static_cast<double>(sc.second);
    table.grand_mean = scored == 0 ? 0.0 : grand / static_cast<double>(scored);
    return table;
}

std::string accuracy_table_to_csv(const AccuracyTable& table) {
    std::ostringstream out;
    out << "links,combo,delay_asym_s,sim_bps,model_bps,accuracy,error\n";
    for (const AccuracyCell& c : table.cells) {
        out << c.links << ',' << c.combo_id << ',' << fmt_double(c.asym_s)
            << ',';
        if (c.error.empty()) {
            out << fmt_double(c.sim_throughput_bps) << ','
                << fmt_double(c.model_throughput_bps) << ','
                << fmt_double(c.accuracy) << ",\n";
        } else {
            std::string sanitized = c.error;
            for (char& ch : sanitized)
                if (ch == ',' || ch == '\n') ch = ';';
            out << ",,," << sanitized << '\n';
        }
    }
    for (const auto& [m, mean] : table.mean_accuracy)
        out << "mean," << m << ",,,," << fmt_double(mean) << ",\n";
    out << "mean,all,,,," << fmt_double(table.grand_mean) << ",\n";
    return out.str();
}

SweepGrid sweep_surface(const std::vector<int>& link_counts, double d_min_s,
                        double b_min_bps,
                        const std::vector<double>& delay_axis_s,
                        const std::vector<double>& bw_axis_bps,
                        const ModelConfig& config) {
    if (link_counts.empty() || delay_axis_s.empty() || bw_axis_bps.empty())
        throw std::invalid_argument("sweep axes must be non-empty");
    SweepGrid grid;
    grid.link_counts = link_counts;
    grid.d_mins_s = {d_min_s};
    grid.delay_axis_s = delay_axis_s;
    grid.bw_axis_bps = bw_axis_bps;
    for (int m : link_counts) {
        if (m == 1) {
            const Scenario s = make_scenario(
                synth_delays(1, d_min_s, 0.0), synth_bandwidths(1, b_min_bps, 0.0),
                config, "m=1");
            const double thr = run_model(s).avg_throughput_bps;
            for (double da : delay_axis_s)
                for (double ba : bw_axis_bps)
                    grid.cells.push_back({1, d_min_s, da, ba, thr});
            continue;
        }
        for (double da : delay_axis_s)
            for (double ba : bw_axis_bps) {
                const Scenario s = make_scenario(
                    synth_delays(m, d_min_s, da),
                    synth_bandwidths(m, b_min_bps, ba), config,
                    "m=" + std::to_string(m));
                grid.cells.push_back(
                    {m, d_min_s, da, ba, run_model(s).avg_throughput_bps});
            }
    }
    return grid;
}

SweepGrid sweep_lines(const std::vector<int>& link_counts,
                      const std::vector<double>& d_mins_s,
                      const std::vector<double>& delay_axis_s,
                      double bandwidth_bps, const ModelConfig& config) {
    if (link_counts.empty() || d_mins_s.empty() || delay_axis_s.empty())
        throw std::invalid_argument("sweep axes must be non-empty");
    SweepGrid grid;
    grid.link_counts = link_counts;
    grid.d_mins_s = d_mins_s;
    grid.delay_axis_s = delay_axis_s;
    for (int m : link_counts)
        for (double dmin : d_mins_s) {
            if (m == 1) {
                const Scenario s = make_scenario(
                    synth_delays(1, dmin, 0.0),
                    synth_bandwidths(1, bandwidth_bps, 0.0), config, "m=1");
                const double thr = run_model(s).avg_throughput_bps;
                for (double da : delay_axis_s)
                    grid.cells.push_back({1, dmin, da, 0.0, thr});
                continue;
            }
            for (double da : delay_axis_s) {
                const Scenario s = make_scenario(
                    synth_delays(m, dmin, da),
                    synth_bandwidths(m, bandwidth_bps, 0.0), config,
                    "m=" + std::to_string(m));
                grid.cells.push_back(
                    {m, dmin, da, 0.0, run_model(s).avg_throughput_bps});
            }
        }
    return grid;
}

std::string surface_to_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "links,delay_asym_s,bw_asym_bps,throughput_bps\n";
    for (const SweepCell& c : grid.cells)
        out << c.links << ',' << fmt_double(c.delay_asym_s) << ','
            << fmt_double(c.bw_asym_bps) << ',' << fmt_double(c.throughput_bps)
            << '\n';
    return out.str();
}

std::string lines_to_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "links,d_min_s,delay_asym_s,throughput_bps\n";
    for (const SweepCell& c : grid.cells)
        out << c.links << ',' << fmt_double(c.d_min_s) << ','
            << fmt_double(c.delay_asym_s) << ','
            << fmt_double(c.throughput_bps) << '\n';
    return out.str();
}

namespace {

std::vector<double> curve_for(const SweepGrid& grid, int links,
                              double d_min_s) {
    std::vector<double> curve;
    for (const SweepCell& c : grid.cells)
        if (c.links == links && c.d_min_s == d_min_s)
            curve.push_back(c.throughput_bps);
    if (curve.size() != grid.delay_axis_s.size())
        throw std::invalid_argument(
            "grid holds no full curve for links=" + std::to_string(links) +
            " at the requested minimum delay");
    return curve;
}

}  // namespace

std::optional<double> crossover_threshold(const SweepGrid& grid, int links,
                                          int baseline_links, double d_min_s) {
    const std::vector<double> curve = curve_for(grid, links, d_min_s);
    const std::vector<double> base = curve_for(grid, baseline_links, d_min_s);
    const std::vector<double>& ax = grid.delay_axis_s;
    for (size_t i = 0; i < ax.size(); ++i) {
        const double gap = curve[i] - base[i];
        if (gap > 0.0) continue;
        if (i == 0) return ax[0];
        const double prev = curve[i - 1] - base[i - 1];
        // linear interpolation of the zero crossing between grid points
        return ax[i - 1] + prev * (ax[i] - ax[i - 1]) / (prev - gap);
    }
    return std::nullopt;
}

int optimal_link_count(double d_min_s, double target_asym_s,
                       double bandwidth_bps, int max_links,
                       const ModelConfig& config) {
    if (max_links < 1) throw std::invalid_argument("max_links must be >= 1");
    int best_m = 1;
    double best_thr = -1.0;
    for (int m = 1; m <= max_links; ++m) {
        const double asym = m == 1 ? 0.0 : target_asym_s;
        const Scenario s =
            make_scenario(synth_delays(m, d_min_s, asym),
                          synth_bandwidths(m, bandwidth_bps, 0.0), config,
                          "m=" + std::to_string(m));
        const double thr = run_model(s).avg_throughput_bps;
        if (thr > best_thr) {
            best_thr = thr;
            best_m = m;
        }
    }
    return best_m;
}

std::vector<double> axis(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("axis needs at least one step");
    if (steps == 1) return {lo};
    std::vector<double> out;
    out.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(steps - 1));
    return out;
}

}  // namespace hetpath
