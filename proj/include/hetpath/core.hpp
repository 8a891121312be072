#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetpath {

// Thrown for filesystem problems (missing file, failed write). Parse and
// validation problems use std::invalid_argument so callers can map the two
// classes to different exit codes.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Link {
    double bandwidth_bps = 0.0;  // > 0
    double delay_s = 0.0;        // one-way propagation, >= 0
};

struct PathSet {
    std::vector<Link> links;

    int size() const { return static_cast<int>(links.size()); }
    double total_bandwidth_bps() const;
};

// Sender-side protocol parameters. Window quantities are expressed in
// segments; scenario files carry them in bytes and the parser divides by the
// segment size.
struct ModelConfig {
    int64_t segment_size_bytes = 536;
    int m_ack = 2;                        // delayed-ack threshold
    double init_window_segments = 1.0;
    double ssthresh_segments = 122.0;     // 65535-byte threshold / 536-byte segments
    int64_t transfer_bytes = 1 << 20;
};

struct Scenario {
    PathSet paths;
    ModelConfig config;
    std::string label;
};

// Per-link lists of candidate propagation delays, keyed by label in file
// order. Used to enumerate delay combinations for experiments.
struct DelayDataset {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values_s;

    int link_count() const { return static_cast<int>(labels.size()); }
    bool empty() const { return labels.empty(); }
};

// Throws std::invalid_argument naming the offending field.
void validate_scenario(const Scenario& s);

int64_t segments_for_bytes(int64_t bytes, int64_t segment_size_bytes);

// Scenario files are flat key=value text ('#' starts a comment):
//   link.<i>.bandwidth_mbps, link.<i>.delay_ms   (i = 1..n, contiguous)
//   segment_size_bytes, m_ack, init_window_bytes, ssthresh_bytes,
//   transfer_bytes                                (all optional, defaulted)
Scenario parse_scenario_text(std::string_view text, std::string label = "");
Scenario load_scenario_file(const std::string& path);

// Delay datasets are CSV with header "link,delay_ms"; one value per row,
// grouped under the link label in first-appearance order.
DelayDataset parse_delay_csv_text(std::string_view text);
DelayDataset load_delay_csv(const std::string& path);

}  // namespace hetpath
