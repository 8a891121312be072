#pragma once

#include <string>
#include <vector>

namespace hetpath {

// Small self-contained SVG renderers for sweep outputs; no external deps.

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series);

// values is row-major: values[row * xs.size() + col], rows indexed by ys.
std::string render_heatmap(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::vector<double>& values);

}  // namespace hetpath
