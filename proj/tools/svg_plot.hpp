#pragma once

// Minimal log-log line plot written as standalone SVG.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "text_format.hpp"

namespace dualprox::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

inline void write_loglog_svg(std::ostream& os, const std::vector<Series>& series, const std::string& title,
                             const std::string& y_label) {
    constexpr double width = 720, height = 460, left = 80, right = 200, top = 40, bottom = 60;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    double x_lo = kInf, x_hi = -kInf, y_lo = kInf, y_hi = -kInf;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, std::log10(s.x[i]));
            x_hi = std::max(x_hi, std::log10(s.x[i]));
            y_lo = std::min(y_lo, std::log10(s.y[i]));
            y_hi = std::max(y_hi, std::log10(s.y[i]));
        }
    if (!(x_lo <= x_hi)) x_lo = 0, x_hi = 1;
    if (!(y_lo <= y_hi)) y_lo = 0, y_hi = 1;
    x_lo = std::floor(x_lo), x_hi = std::max(std::ceil(x_hi), x_lo + 1);
    y_lo = std::floor(y_lo), y_hi = std::max(std::ceil(y_hi), y_lo + 1);

    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double ly) { return top + (y_hi - ly) / (y_hi - y_lo) * ph; };
    auto num = [](double v) { return format_double(std::round(v * 100.0) / 100.0); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    for (double d = x_lo; d <= x_hi; d += 1.0) {
        os << "<line x1=\"" << num(px(d)) << "\" y1=\"" << top << "\" x2=\"" << num(px(d)) << "\" y2=\"" << top + ph
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << num(px(d)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (double d = y_lo; d <= y_hi; d += 1.0) {
        os << "<line x1=\"" << left << "\" y1=\"" << num(py(d)) << "\" x2=\"" << left + pw << "\" y2=\"" << num(py(d))
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">k</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
       << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % (sizeof colors / sizeof *colors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double x = series[s].x[i], y = series[s].y[i];
            if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
            if (!first) os << ' ';
            os << num(px(std::log10(x))) << ',' << num(py(std::log10(y)));
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(s + 1);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly - 4
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly << "\">" << series[s].label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace dualprox::cli
