#include "hetpath/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hetpath {

namespace {

constexpr double kWidth = 880.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 90.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 65.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void widen(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) { lo = 0.0; hi = 1.0; }
        if (lo == hi) { lo -= 0.5; hi += 0.5; }
    }
};

double scale(double v, const Range& r, double out_lo, double out_hi) {
    return out_lo + (v - r.lo) / (r.hi - r.lo) * (out_hi - out_lo);
}

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" "
           "font-size=\"17\">"
        << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Range& xr, const Range& yr,
          const std::string& x_label, const std::string& y_label) {
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
        << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
        << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double px = scale(fx, xr, x0, x1);
        out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px
            << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << y0 + 20
            << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        const double py = scale(fy, yr, y0, y1);
        out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0
            << "\" y2=\"" << py << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x0 - 9 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 18
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
        << "<text x=\"22\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
        << (y0 + y1) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series) {
    if (series.empty())
        throw std::invalid_argument("line chart needs at least one series");
    Range xr, yr;
    for (const SvgSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series " + s.name +
                                        " has mismatched x/y lengths");
        for (double v : s.x) xr.widen(v);
        for (double v : s.y) yr.widen(v);
    }
    xr.pad();
    yr.pad();

    std::ostringstream out;
    open_svg(out, title);
    axes(out, xr, yr, x_label, y_label);
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    for (size_t si = 0; si < series.size(); ++si) {
        const SvgSeries& s = series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i)
            out << num(scale(s.x[i], xr, x0, x1)) << ','
                << num(scale(s.y[i], yr, y0, y1)) << ' ';
        out << "\"/>\n";
        const double ly = kMarginTop + 16.0 * static_cast<double>(si);
        out << "<line x1=\"" << x1 - 150 << "\" y1=\"" << ly << "\" x2=\""
            << x1 - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n"
            << "<text x=\"" << x1 - 120 << "\" y=\"" << ly + 4 << "\">"
            << escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heatmap(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::vector<double>& values) {
    if (xs.empty() || ys.empty())
        throw std::invalid_argument("heatmap axes must be non-empty");
    if (values.size() != xs.size() * ys.size())
        throw std::invalid_argument("heatmap needs xs*ys values");

    Range vr;
    for (double v : values) vr.widen(v);
    vr.pad();
    Range xr, yr;
    for (double v : xs) xr.widen(v);
    for (double v : ys) yr.widen(v);
    xr.pad();
    yr.pad();

    std::ostringstream out;
    open_svg(out, title);
    axes(out, xr, yr, x_label, y_label);
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const double cw = (x1 - x0) / static_cast<double>(xs.size());
    const double ch = (y0 - y1) / static_cast<double>(ys.size());
    for (size_t row = 0; row < ys.size(); ++row)
        for (size_t col = 0; col < xs.size(); ++col) {
            const double v = values[row * xs.size() + col];
            const double t = (v - vr.lo) / (vr.hi - vr.lo);
            // cold blue to warm red
            const int r = static_cast<int>(std::lround(40 + 215 * t));
            const int g = static_cast<int>(std::lround(60 + 60 * (1 - std::fabs(2 * t - 1))));
            const int b = static_cast<int>(std::lround(40 + 215 * (1 - t)));
            out << "<rect x=\"" << num(x0 + cw * static_cast<double>(col))
                << "\" y=\"" << num(y0 - ch * static_cast<double>(row + 1))
                << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
                << "\" fill=\"rgb(" << r << ',' << g << ',' << b << ")\"/>\n";
        }
    out << "<text x=\"" << x1 - 240 << "\" y=\"" << kMarginTop - 8 << "\">min "
        << num(vr.lo) << "  max " << num(vr.hi) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace hetpath
