#pragma once

// Self-contained SVG plots from a CSV table: axes, tick labels, legend, one
// polyline per series. Text output only, byte-deterministic for identical
// input. Series come either from multiple y columns or from a grouping
// column (one curve per distinct group value).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi_mimo/sweep.hpp"

namespace aoi_mimo {

struct SvgStyle {
    bool log_y = false;
    std::string x_column;                    // default: first column
    std::vector<std::string> y_columns;      // default: all remaining numeric columns
    std::string group_column;                // optional: one series per group value
};

namespace detail {

inline constexpr const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#8c564b",
                                                "#17becf", "#7f7f7f"};

inline std::string fmt2(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
}

inline std::string fmt_tick(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

}  // namespace detail

inline std::string emit_svg(const Table& t, const SvgStyle& style = {}) {
    if (t.rows.empty()) throw std::invalid_argument("emit_svg: empty input");
    auto col_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            if (t.columns[i] == name) return i;
        throw std::invalid_argument("emit_svg: no column '" + name + "'");
    };
    const std::size_t xc = col_index(style.x_column.empty() ? t.columns.at(0) : style.x_column);
    std::vector<std::size_t> ycs;
    if (style.y_columns.empty()) {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            if (i != xc && (style.group_column.empty() || t.columns[i] != style.group_column))
                ycs.push_back(i);
    } else {
        for (const auto& name : style.y_columns) ycs.push_back(col_index(name));
    }
    if (ycs.empty()) throw std::invalid_argument("emit_svg: no y columns");

    // series key -> list of (x, y)
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
    auto series_ref = [&](const std::string& key) -> std::vector<std::pair<double, double>>& {
        for (auto& s : series)
            if (s.first == key) return s.second;
        series.emplace_back(key, std::vector<std::pair<double, double>>{});
        return series.back().second;
    };
    const bool grouped = !style.group_column.empty();
    const std::size_t gc = grouped ? col_index(style.group_column) : 0;
    for (const auto& row : t.rows) {
        if (!row[xc]) continue;
        for (const std::size_t yc : ycs) {
            if (!row[yc]) continue;
            const double y = *row[yc];
            if (!std::isfinite(y) || (style.log_y && !(y > 0.0))) continue;
            std::string key = t.columns[yc];
            if (grouped && row[gc]) {
                const std::string g = format_value(*row[gc]);
                key = ycs.size() > 1 ? t.columns[yc] + " " + g : t.columns[gc] + "=" + g;
            }
            series_ref(key).push_back({*row[xc], y});
        }
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.second) {
            const double yy = style.log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    }
    if (xmin > xmax) throw std::invalid_argument("emit_svg: no plottable data");
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }

    const double W = 860, H = 600, mL = 80, mR = 160, mT = 30, mB = 60;
    auto px = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
    auto py = [&](double y) {
        const double v = style.log_y ? std::log10(y) : y;
        return H - mB - (v - ymin) / (ymax - ymin) * (H - mT - mB);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"600\" "
           "viewBox=\"0 0 860 600\">\n"
        << "<rect width=\"860\" height=\"600\" fill=\"white\"/>\n"
        << "<g font-family=\"monospace\" font-size=\"12\">\n";
    // axes
    out << "<line x1=\"" << detail::fmt2(mL) << "\" y1=\"" << detail::fmt2(H - mB)
        << "\" x2=\"" << detail::fmt2(W - mR) << "\" y2=\"" << detail::fmt2(H - mB)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << detail::fmt2(mL) << "\" y1=\"" << detail::fmt2(mT)
        << "\" x2=\"" << detail::fmt2(mL) << "\" y2=\"" << detail::fmt2(H - mB)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double gy = ymin + (ymax - ymin) * i / 5.0;
        const double xx = px(fx);
        const double yy = H - mB - (gy - ymin) / (ymax - ymin) * (H - mT - mB);
        out << "<line x1=\"" << detail::fmt2(xx) << "\" y1=\"" << detail::fmt2(H - mB)
            << "\" x2=\"" << detail::fmt2(xx) << "\" y2=\"" << detail::fmt2(H - mB + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::fmt2(xx) << "\" y=\"" << detail::fmt2(H - mB + 20)
            << "\" text-anchor=\"middle\">" << detail::fmt_tick(fx) << "</text>\n";
        out << "<line x1=\"" << detail::fmt2(mL - 5) << "\" y1=\"" << detail::fmt2(yy)
            << "\" x2=\"" << detail::fmt2(mL) << "\" y2=\"" << detail::fmt2(yy)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::fmt2(mL - 8) << "\" y=\"" << detail::fmt2(yy + 4)
            << "\" text-anchor=\"end\">"
            << detail::fmt_tick(style.log_y ? std::pow(10.0, gy) : gy) << "</text>\n";
    }
    out << "<text x=\"" << detail::fmt2((mL + W - mR) / 2) << "\" y=\""
        << detail::fmt2(H - 15) << "\" text-anchor=\"middle\">" << t.columns[xc]
        << "</text>\n";
    // series
    std::size_t si = 0;
    for (const auto& [key, pts] : series) {
        const char* color = detail::kSeriesColors[si % 8];
        if (pts.size() == 1) {
            out << "<circle cx=\"" << detail::fmt2(px(pts[0].first)) << "\" cy=\""
                << detail::fmt2(py(pts[0].second)) << "\" r=\"4\" fill=\"" << color
                << "\"/>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : pts)
                out << detail::fmt2(px(x)) << ',' << detail::fmt2(py(y)) << ' ';
            out << "\"/>\n";
        }
        const double ly = mT + 18.0 * static_cast<double>(si) + 10.0;
        out << "<line x1=\"" << detail::fmt2(W - mR + 10) << "\" y1=\"" << detail::fmt2(ly)
            << "\" x2=\"" << detail::fmt2(W - mR + 35) << "\" y2=\"" << detail::fmt2(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << detail::fmt2(W - mR + 40) << "\" y=\"" << detail::fmt2(ly + 4)
            << "\">" << key << "</text>\n";
        ++si;
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace aoi_mimo
