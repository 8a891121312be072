#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hetpath {

// 17 significant digits: enough for exact double round-trips.
std::string fmt_double(double v);

std::string read_text_file(const std::string& path);

// Writes to <path>.tmp and renames, so readers never observe partial files.
void write_text_atomic(const std::string& path, std::string_view content);

// Minimal CSV reader for our own outputs: no quoting, '#' comment lines and
// blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv_text(std::string_view text);

}  // namespace hetpath
