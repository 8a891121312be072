#include "hetpath/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetpath/core.hpp"

namespace hetpath {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw io_error("read failed for " + path);
    return out.str();
}

void write_text_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw io_error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("rename to " + path + " failed: " + ec.message());
}

std::vector<std::vector<std::string>> parse_csv_text(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        size_t f = 0;
        while (true) {
            size_t comma = line.find(',', f);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(f));
                break;
            }
            fields.emplace_back(line.substr(f, comma - f));
            f = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace hetpath
