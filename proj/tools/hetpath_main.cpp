// hetpath: analytical throughput model and packet-level simulator for one TCP
// flow striped round-robin over heterogeneous links.
//
// Subcommands: model, sim, compare, sweep, validate-prob. Everything is
// deterministic and non-interactive; CSV files are the primary outputs,
// key=value lines on stdout are the quick summaries.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetpath/core.hpp"
#include "hetpath/csv.hpp"
#include "hetpath/eval.hpp"
#include "hetpath/metrics.hpp"
#include "hetpath/model.hpp"
#include "hetpath/reorder_prob.hpp"
#include "hetpath/simulator.hpp"
#include "hetpath/svg.hpp"
#include "hetpath/units.hpp"

namespace fs = std::filesystem;
using namespace hetpath;

namespace {

// "4", "2-8", or "1,3-5" -> expanded integer list
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const auto dash = token.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(std::stoi(token));
            continue;
        }
        const int lo = std::stoi(token.substr(0, dash));
        const int hi = std::stoi(token.substr(dash + 1));
        if (hi < lo)
            throw std::invalid_argument("descending range '" + token + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) out.push_back(std::stod(token));
    if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
    return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw io_error("cannot create output directory " + dir + ": " +
                       ec.message());
    return (p / name).string();
}

struct Common {
    std::string out_dir = ".";
    uint64_t seed = 0;  // reserved: the pipeline has no random draws yet
    int jobs = 1;
};

void run_model_cmd(const Common& common, const std::string& scenario_path,
                   const std::string& report_name) {
    const Scenario scenario = load_scenario_file(scenario_path);
    const ThroughputReport report = run_model(scenario);
    write_text_atomic(out_path(common.out_dir, report_name),
                      report_to_csv(report));
    std::cout << "rounds=" << report.rounds.size() << '\n'
              << "total_segments=" << fmt_double(report.total_segments) << '\n'
              << "total_time_s=" << fmt_double(report.total_time_s) << '\n'
              << "throughput_bps=" << fmt_double(report.avg_throughput_bps)
              << '\n';
}

void run_sim_cmd(const Common& common, const std::string& scenario_path,
                 bool fast_retransmit, double ack_delay_ms, bool log_arrivals) {
    const Scenario scenario = load_scenario_file(scenario_path);
    SimOptions opts;
    opts.fast_retransmit = fast_retransmit;
    opts.ack_delay_s = ms_to_s(ack_delay_ms);
    opts.log_arrivals = log_arrivals;
    const SimReport report = run_sim(scenario, opts);
    if (log_arrivals)
        write_text_atomic(out_path(common.out_dir, "arrivals.csv"),
                          arrivals_to_csv(report));
    std::cout << "segments_sent=" << report.segments_sent << '\n'
              << "retransmissions=" << report.retransmissions << '\n'
              << "spurious_retransmissions=" << report.spurious_retransmissions
              << '\n'
              << "out_of_order_arrivals=" << report.out_of_order_arrivals
              << '\n'
              << "acks_received=" << report.acks_received << '\n'
              << "duplicate_acks=" << report.duplicate_acks << '\n'
              << "finish_time_s=" << fmt_double(report.finish_time_s) << '\n'
              << "throughput_bps=" << fmt_double(report.throughput_bps)
              << '\n';
}

void run_compare_cmd(const Common& common, const std::string& delays_path,
                     const std::string& links_spec, int combo_count,
                     int64_t transfer_bytes,
                     const std::string& bandwidth_mbps_spec) {
    const DelayDataset dataset = load_delay_csv(delays_path);
    const std::vector<int> link_counts = parse_int_list(links_spec);

    std::vector<double> bandwidths_bps;
    if (bandwidth_mbps_spec.empty()) {
        bandwidths_bps = reference_bandwidths_bps();
    } else {
        for (double mbps : parse_double_list(bandwidth_mbps_spec))
            bandwidths_bps.push_back(mbps_to_bps(mbps));
    }

    ModelConfig config;
    config.transfer_bytes = transfer_bytes;

    const AccuracyTable table =
        accuracy_experiment(dataset, bandwidths_bps, link_counts, config,
                            combo_count, common.jobs);
    write_text_atomic(out_path(common.out_dir, "accuracy_table.csv"),
                      accuracy_table_to_csv(table));
    for (const auto& [m, mean] : table.mean_accuracy)
        std::cout << "mean_accuracy[" << m << "]=" << fmt_double(mean) << '\n';
    std::cout << "grand_mean=" << fmt_double(table.grand_mean) << '\n';
}

void run_sweep_cmd(const Common& common, const std::string& mode,
                   const std::string& links_spec,
                   const std::string& d_min_ms_spec, double asym_lo_ms,
                   double asym_hi_ms, int steps, double bandwidth_kbps,
                   double bw_asym_lo_kbps, double bw_asym_hi_kbps,
                   int bw_steps, int64_t transfer_bytes, bool emit_svg) {
    const std::vector<int> link_counts = parse_int_list(links_spec);
    const std::vector<double> d_mins_ms = parse_double_list(d_min_ms_spec);

    ModelConfig config;
    config.transfer_bytes = transfer_bytes;

    std::vector<double> delay_axis_s;
    for (double ms : axis(asym_lo_ms, asym_hi_ms, steps))
        delay_axis_s.push_back(ms_to_s(ms));

    if (mode == "lines") {
        std::vector<double> d_mins_s;
        for (double ms : d_mins_ms) d_mins_s.push_back(ms_to_s(ms));
        const SweepGrid grid =
            sweep_lines(link_counts, d_mins_s, delay_axis_s,
                        kbps_to_bps(bandwidth_kbps), config);
        write_text_atomic(out_path(common.out_dir, "sweep_lines.csv"),
                          lines_to_csv(grid));
        const bool have_baseline =
            std::find(link_counts.begin(), link_counts.end(), 1) !=
            link_counts.end();
        for (int m : link_counts) {
            if (m == 1) continue;
            for (double dmin : d_mins_s) {
                std::cout << "crossover_ms[m=" << m
                          << "][d_min_ms=" << s_to_ms(dmin) << "]=";
                if (!have_baseline) {
                    std::cout << "n/a (add 1 to --links for the baseline)\n";
                    continue;
                }
                const auto threshold = crossover_threshold(grid, m, 1, dmin);
                if (threshold)
                    std::cout << fmt_double(s_to_ms(*threshold)) << '\n';
                else
                    std::cout << "none\n";
            }
        }
        if (emit_svg) {
            std::vector<SvgSeries> series;
            for (int m : link_counts)
                for (double dmin : d_mins_s) {
                    SvgSeries s;
                    s.name = "m=" + std::to_string(m) + " d=" +
                             std::to_string(static_cast<int>(s_to_ms(dmin))) +
                             "ms";
                    for (const SweepCell& c : grid.cells)
                        if (c.links == m && c.d_min_s == dmin) {
                            s.x.push_back(s_to_ms(c.delay_asym_s));
                            s.y.push_back(c.throughput_bps);
                        }
                    series.push_back(std::move(s));
                }
            write_text_atomic(
                out_path(common.out_dir, "sweep_lines.svg"),
                render_line_chart("throughput vs delay asymmetry",
                                  "delay asymmetry (ms)", "throughput (bit/s)",
                                  series));
        }
        return;
    }
    if (mode == "surface") {
        if (d_mins_ms.size() != 1)
            throw std::invalid_argument(
                "surface mode takes exactly one --d-min-ms value");
        std::vector<double> bw_axis_bps;
        for (double kbps : axis(bw_asym_lo_kbps, bw_asym_hi_kbps, bw_steps))
            bw_axis_bps.push_back(kbps_to_bps(kbps));
        const SweepGrid grid =
            sweep_surface(link_counts, ms_to_s(d_mins_ms[0]),
                          kbps_to_bps(bandwidth_kbps), delay_axis_s,
                          bw_axis_bps, config);
        write_text_atomic(out_path(common.out_dir, "sweep_surface.csv"),
                          surface_to_csv(grid));
        if (emit_svg) {
            // one heatmap per link count; rows are bandwidth asymmetry
            for (int m : link_counts) {
                std::vector<double> values(
                    bw_axis_bps.size() * delay_axis_s.size(), 0.0);
                for (const SweepCell& c : grid.cells) {
                    if (c.links != m) continue;
                    size_t col = 0, row = 0;
                    while (grid.delay_axis_s[col] != c.delay_asym_s) ++col;
                    while (grid.bw_axis_bps[row] != c.bw_asym_bps) ++row;
                    values[row * delay_axis_s.size() + col] = c.throughput_bps;
                }
                std::vector<double> xs_ms, ys_kbps;
                for (double v : delay_axis_s) xs_ms.push_back(s_to_ms(v));
                for (double v : bw_axis_bps) ys_kbps.push_back(bps_to_kbps(v));
                write_text_atomic(
                    out_path(common.out_dir,
                             "sweep_surface_m" + std::to_string(m) + ".svg"),
                    render_heatmap("throughput, m=" + std::to_string(m),
                                   "delay asymmetry (ms)",
                                   "bandwidth asymmetry (kbit/s)", xs_ms,
                                   ys_kbps, values));
            }
        }
        return;
    }
    throw std::invalid_argument("unknown sweep mode '" + mode +
                                "' (expected lines or surface)");
}

int run_validate_prob_cmd(int max_c) {
    if (max_c < 2) throw std::invalid_argument("--max-c must be >= 2");
    constexpr double kTol = 1e-12;
    bool all_ok = true;
    for (int c = 2; c <= max_c; ++c) {
        double m_err = 0.0;
        for (int m_ack = 1; m_ack <= 4; ++m_ack) {
            const MDistribution closed = m_distribution(c, m_ack);
            const MDistribution brute = brute_force_m_distribution(c, m_ack);
            for (size_t i = 0; i < closed.p_exact.size(); ++i)
                m_err = std::max(
                    m_err, std::fabs(closed.p_exact[i] - brute.p_exact[i]));
            m_err = std::max(m_err, std::fabs(closed.p_tail - brute.p_tail));
        }
        const QDistribution q_closed = q_distribution(c);
        const QDistribution q_brute = brute_force_q_distribution(c);
        double q_err = 0.0;
        for (size_t i = 0; i < q_closed.p.size(); ++i)
            q_err = std::max(q_err, std::fabs(q_closed.p[i] - q_brute.p[i]));
        const bool ok = m_err <= kTol && q_err <= kTol;
        all_ok = all_ok && ok;
        std::cout << "C=" << c << " m_max_err=" << fmt_double(m_err)
                  << " q_max_err=" << fmt_double(q_err)
                  << (ok ? " OK" : " MISMATCH") << '\n';
    }
    std::cout << "uncorrected q form (missing factorial in the middle "
                 "branch):\n";
    for (int c = 3; c <= max_c; ++c) {
        const QDistribution fixed = q_distribution(c);
        const QDistribution uncorrected = q_distribution_uncorrected(c);
        const double deficit = 1.0 - uncorrected.total_mass();
        std::cout << "C=" << c
                  << " total_mass=" << fmt_double(uncorrected.total_mass())
                  << " deficit=" << fmt_double(deficit)
                  << " p_q_eq_Cminus1=" << fmt_double(fixed.p[c - 2]) << '\n';
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "throughput model and packet simulator for TCP striped over "
        "heterogeneous links"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    const char* env_out = std::getenv("HETPATH_OUT");
    if (env_out != nullptr && *env_out != '\0') common.out_dir = env_out;
    app.add_option("--out", common.out_dir, "output directory")
        ->capture_default_str();
    app.add_option("--seed", common.seed,
                   "reserved; current pipeline is deterministic");
    app.add_option("--jobs", common.jobs, "worker threads for compare")
        ->check(CLI::PositiveNumber);

    auto* model_cmd =
        app.add_subcommand("model", "run the analytical model on a scenario");
    std::string model_scenario;
    std::string model_report = "report.csv";
    model_cmd->add_option("scenario", model_scenario, "scenario file")
        ->required();
    model_cmd->add_option("--report", model_report, "report file name")
        ->capture_default_str();

    auto* sim_cmd =
        app.add_subcommand("sim", "run the packet-level simulator");
    std::string sim_scenario;
    bool sim_fr = false, sim_log = false;
    double sim_ack_delay_ms = 0.0;
    sim_cmd->add_option("scenario", sim_scenario, "scenario file")->required();
    sim_cmd->add_flag("--fast-retransmit", sim_fr,
                      "react to triple duplicate acks");
    sim_cmd->add_option("--ack-delay-ms", sim_ack_delay_ms,
                        "receiver-to-sender delay");
    sim_cmd->add_flag("--log-arrivals", sim_log,
                      "write per-segment arrivals.csv");

    auto* compare_cmd = app.add_subcommand(
        "compare", "score the model against the simulator on a delay dataset");
    std::string cmp_delays, cmp_links = "2-8", cmp_bw;
    int cmp_count = 36;
    int64_t cmp_transfer = kAccuracyTransferBytes;
    compare_cmd->add_option("--delays", cmp_delays, "delay dataset CSV")
        ->required();
    compare_cmd->add_option("--links", cmp_links, "link counts, e.g. 2-8")
        ->capture_default_str();
    compare_cmd
        ->add_option("--count", cmp_count, "delay combinations per link count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd
        ->add_option("--transfer", cmp_transfer, "transfer size in bytes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option(
        "--bandwidth-mbps", cmp_bw,
        "per-link bandwidths (defaults to the built-in reference set)");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "model throughput over asymmetry ranges");
    std::string swp_mode = "lines", swp_links = "1-4", swp_dmin = "5,20,35,50";
    double swp_lo = 10.0, swp_hi = 90.0, swp_bw_kbps = 100.0;
    double swp_bw_lo = 0.0, swp_bw_hi = 700.0;
    int swp_steps = 33, swp_bw_steps = 8;
    int64_t swp_transfer = kExperimentTransferBytes;
    bool swp_svg = false;
    sweep_cmd->add_option("--mode", swp_mode, "lines or surface")
        ->check(CLI::IsMember({"lines", "surface"}))
        ->capture_default_str();
    sweep_cmd->add_option("--links", swp_links, "link counts")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--d-min-ms", swp_dmin,
                     "minimum link delays (surface mode takes one)")
        ->capture_default_str();
    sweep_cmd->add_option("--asym-lo-ms", swp_lo, "delay asymmetry range start")
        ->capture_default_str();
    sweep_cmd->add_option("--asym-hi-ms", swp_hi, "delay asymmetry range end")
        ->capture_default_str();
    sweep_cmd->add_option("--steps", swp_steps, "delay axis points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd
        ->add_option("--bandwidth-kbps", swp_bw_kbps,
                     "per-link bandwidth (lines) / minimum bandwidth (surface)")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--bw-asym-lo-kbps", swp_bw_lo,
                     "bandwidth asymmetry range start (surface)")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--bw-asym-hi-kbps", swp_bw_hi,
                     "bandwidth asymmetry range end (surface)")
        ->capture_default_str();
    sweep_cmd->add_option("--bw-steps", swp_bw_steps,
                          "bandwidth axis points (surface)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_option("--transfer", swp_transfer, "transfer size in bytes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep_cmd->add_flag("--svg", swp_svg, "also render charts");

    auto* validate_cmd = app.add_subcommand(
        "validate-prob",
        "check closed-form reorder distributions against brute force");
    int val_max_c = 8;
    validate_cmd->add_option("--max-c", val_max_c, "largest batch size")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (model_cmd->parsed()) {
            run_model_cmd(common, model_scenario, model_report);
        } else if (sim_cmd->parsed()) {
            run_sim_cmd(common, sim_scenario, sim_fr, sim_ack_delay_ms,
                        sim_log);
        } else if (compare_cmd->parsed()) {
            run_compare_cmd(common, cmp_delays, cmp_links, cmp_count,
                            cmp_transfer, cmp_bw);
        } else if (sweep_cmd->parsed()) {
            run_sweep_cmd(common, swp_mode, swp_links, swp_dmin, swp_lo,
                          swp_hi, swp_steps, swp_bw_kbps, swp_bw_lo, swp_bw_hi,
                          swp_bw_steps, swp_transfer, swp_svg);
        } else if (validate_cmd->parsed()) {
            return run_validate_prob_cmd(val_max_c);
        }
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
