#include "hetpath/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "hetpath/csv.hpp"
#include "hetpath/units.hpp"

namespace hetpath {

double PathSet::total_bandwidth_bps() const {
    double t = 0.0;
    for (const Link& l : links) t += l.bandwidth_bps;
    return t;
}

void validate_scenario(const Scenario& s) {
    auto fail = [&](const std::string& what) {
        std::string prefix = s.label.empty() ? "" : s.label + ": ";
        throw std::invalid_argument(prefix + what);
    };
    if (s.paths.links.empty()) fail("at least one link is required");
    for (size_t i = 0; i < s.paths.links.size(); ++i) {
        const Link& l = s.paths.links[i];
        const std::string id = "link " + std::to_string(i + 1);
        if (!(l.bandwidth_bps > 0.0) || !std::isfinite(l.bandwidth_bps))
            fail(id + ": bandwidth_bps must be positive and finite");
        if (!(l.delay_s >= 0.0) || !std::isfinite(l.delay_s))
            fail(id + ": delay_s must be non-negative and finite");
    }
    const ModelConfig& c = s.config;
    if (c.segment_size_bytes <= 0) fail("segment_size_bytes must be positive");
    if (c.m_ack < 1) fail("m_ack must be >= 1");
    if (c.transfer_bytes <= 0) fail("transfer_bytes must be positive");
    if (!(c.init_window_segments >= 1.0))
        fail("init_window_segments must be >= 1");
    if (!(c.ssthresh_segments >= c.init_window_segments))
        fail("ssthresh_segments must be >= init_window_segments");
}

int64_t segments_for_bytes(int64_t bytes, int64_t segment_size_bytes) {
    if (bytes <= 0 || segment_size_bytes <= 0)
        throw std::invalid_argument("segments_for_bytes: sizes must be positive");
    return (bytes + segment_size_bytes - 1) / segment_size_bytes;
}

namespace {

std::string_view trim(std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front())))
        v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
        v.remove_suffix(1);
    return v;
}

double parse_number(std::string_view v, int line_no) {
    std::string tmp(v);
    char* end = nullptr;
    double x = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": bad number '" + tmp + "'");
    return x;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, std::string label) {
    struct LinkRaw {
        std::optional<double> bw_mbps;
        std::optional<double> delay_ms;
    };
    std::map<int, LinkRaw> links;
    std::map<std::string, double> scalars;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                           : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key=value");
        std::string key(trim(line.substr(0, eq)));
        double value = parse_number(trim(line.substr(eq + 1)), line_no);

        if (key.rfind("link.", 0) == 0) {
            size_t dot = key.find('.', 5);
            if (dot == std::string::npos)
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": malformed link key '" + key + "'");
            int idx = 0;
            try {
                size_t used = 0;
                idx = std::stoi(key.substr(5, dot - 5), &used);
                if (used != dot - 5) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": bad link index in '" + key + "'");
            }
            std::string field = key.substr(dot + 1);
            LinkRaw& raw = links[idx];
            if (field == "bandwidth_mbps") {
                if (raw.bw_mbps)
                    throw std::invalid_argument("line " + std::to_string(line_no) +
                                                ": duplicate key '" + key + "'");
                raw.bw_mbps = value;
            } else if (field == "delay_ms") {
                if (raw.delay_ms)
                    throw std::invalid_argument("line " + std::to_string(line_no) +
                                                ": duplicate key '" + key + "'");
                raw.delay_ms = value;
            } else {
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": unknown link field '" + field + "'");
            }
        } else {
            static const char* known[] = {"segment_size_bytes", "m_ack",
                                          "init_window_bytes", "ssthresh_bytes",
                                          "transfer_bytes"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return key == k; }) ==
                std::end(known))
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": unknown key '" + key + "'");
            if (scalars.count(key))
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": duplicate key '" + key + "'");
            scalars[key] = value;
        }
    }

    if (links.empty())
        throw std::invalid_argument("scenario defines no links");

    Scenario s;
    s.label = std::move(label);
    int expect = 1;
    for (const auto& [idx, raw] : links) {
        if (idx != expect)
            throw std::invalid_argument(
                "link indices must be contiguous from 1; missing link." +
                std::to_string(expect));
        if (!raw.bw_mbps)
            throw std::invalid_argument("link." + std::to_string(idx) +
                                        ".bandwidth_mbps is missing");
        if (!raw.delay_ms)
            throw std::invalid_argument("link." + std::to_string(idx) +
                                        ".delay_ms is missing");
        s.paths.links.push_back(
            {mbps_to_bps(*raw.bw_mbps), ms_to_s(*raw.delay_ms)});
        ++expect;
    }

    ModelConfig cfg;  // carries the defaults
    if (auto it = scalars.find("segment_size_bytes"); it != scalars.end())
        cfg.segment_size_bytes = static_cast<int64_t>(std::llround(it->second));
    if (auto it = scalars.find("m_ack"); it != scalars.end())
        cfg.m_ack = static_cast<int>(std::llround(it->second));
    if (auto it = scalars.find("transfer_bytes"); it != scalars.end())
        cfg.transfer_bytes = static_cast<int64_t>(std::llround(it->second));
    if (cfg.segment_size_bytes <= 0)
        throw std::invalid_argument("segment_size_bytes must be positive");
    const double seg = static_cast<double>(cfg.segment_size_bytes);
    if (auto it = scalars.find("init_window_bytes"); it != scalars.end())
        cfg.init_window_segments = it->second / seg;
    if (auto it = scalars.find("ssthresh_bytes"); it != scalars.end())
        cfg.ssthresh_segments = std::floor(it->second / seg);
    s.config = cfg;

    validate_scenario(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    return parse_scenario_text(read_text_file(path), path);
}

DelayDataset parse_delay_csv_text(std::string_view text) {
    auto rows = parse_csv_text(text);
    if (rows.empty())
        throw std::invalid_argument("delay dataset is empty");
    if (rows[0].size() != 2 || trim(rows[0][0]) != "link" ||
        trim(rows[0][1]) != "delay_ms")
        throw std::invalid_argument(
            "delay dataset must start with header 'link,delay_ms'");

    DelayDataset ds;
    std::map<std::string, size_t> by_label;
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw std::invalid_argument("delay dataset row " + std::to_string(r + 1) +
                                        ": expected 2 fields");
        std::string lbl(trim(rows[r][0]));
        if (lbl.empty())
            throw std::invalid_argument("delay dataset row " + std::to_string(r + 1) +
                                        ": empty link label");
        double ms = parse_number(trim(rows[r][1]), static_cast<int>(r + 1));
        if (!(ms > 0.0) || !std::isfinite(ms))
            throw std::invalid_argument("delay dataset row " + std::to_string(r + 1) +
                                        ": delay_ms must be positive");
        auto [it, fresh] = by_label.try_emplace(lbl, ds.labels.size());
        if (fresh) {
            ds.labels.push_back(lbl);
            ds.values_s.emplace_back();
        }
        ds.values_s[it->second].push_back(ms_to_s(ms));
    }
    if (ds.empty())
        throw std::invalid_argument("delay dataset has a header but no rows");
    return ds;
}

DelayDataset load_delay_csv(const std::string& path) {
    return parse_delay_csv_text(read_text_file(path));
}

}  // namespace hetpath
