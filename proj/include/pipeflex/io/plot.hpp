#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "pipeflex/io/csv.hpp"

namespace pipeflex::io {

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else if (ch == '&') out += "&amp;";
        else out += ch;
    }
    return out;
}

} // namespace detail

/// Standalone SVG line chart; non-finite points split the polyline.
inline std::string render_svg(const LinePlot& plot, const std::string& config_hash)
{
    constexpr double W = 640, H = 400, left = 70, right = 20, top = 40, bottom = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (std::size_t i = 0; i < plot.x.size() && i < plot.y.size(); ++i) {
        if (!std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i])) continue;
        x0 = std::min(x0, plot.x[i]);
        x1 = std::max(x1, plot.x[i]);
        y0 = std::min(y0, plot.y[i]);
        y1 = std::max(y1, plot.y[i]);
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::string s = "<!-- " + hash_comment(config_hash) + " -->\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         detail::escape(plot.title) + "</text>\n";
    s += "<rect x=\"70\" y=\"40\" width=\"" + detail::fmt("%g", pw) + "\" height=\"" + detail::fmt("%g", ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        s += "<text x=\"" + detail::fmt("%.1f", sx(xv)) + "\" y=\"" + detail::fmt("%g", H - bottom + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt("%.3g", xv) +
             "</text>\n";
        s += "<text x=\"" + detail::fmt("%g", left - 6) + "\" y=\"" + detail::fmt("%.1f", sy(yv) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt("%.3g", yv) +
             "</text>\n";
    }
    s += "<text x=\"" + detail::fmt("%g", left + pw / 2) + "\" y=\"" + detail::fmt("%g", H - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(plot.x_label) +
         "</text>\n";
    s += "<text x=\"16\" y=\"" + detail::fmt("%g", top + ph / 2) + "\" transform=\"rotate(-90 16 " +
         detail::fmt("%g", top + ph / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         detail::escape(plot.y_label) + "</text>\n";

    std::string points;
    auto flush = [&] {
        if (!points.empty())
            s += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < plot.x.size() && i < plot.y.size(); ++i) {
        if (!std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += detail::fmt("%.2f", sx(plot.x[i])) + "," + detail::fmt("%.2f", sy(plot.y[i]));
    }
    flush();
    s += "</svg>\n";
    return s;
}

/// Writes <prefix>_E.svg, <prefix>_Lcal.svg and <prefix>_lnE.svg from a
/// parsed time series; returns the paths.
inline std::vector<std::string> write_energy_plots(const Timeseries& ts, const std::string& prefix)
{
    const auto t = ts.column(0);
    const auto E = ts.column(1);
    std::vector<double> lnE;
    for (double e : E) lnE.push_back(e > 0.0 ? std::log(e) : std::numeric_limits<double>::quiet_NaN());
    const std::vector<std::pair<std::string, LinePlot>> plots{
        {"_E.svg", {"Energy", "t", "E", t, E}},
        {"_Lcal.svg", {"Lyapunov functional", "t", "Lcal", t, ts.column(5)}},
        {"_lnE.svg", {"Log energy", "t", "ln E", t, lnE}},
    };
    std::vector<std::string> paths;
    for (const auto& [suffix, plot] : plots) {
        paths.push_back(prefix + suffix);
        write_text(paths.back(), render_svg(plot, ts.config_hash));
    }
    return paths;
}

} // namespace pipeflex::io
