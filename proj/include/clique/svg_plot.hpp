#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "clique/errors.hpp"
#include "clique/summarize.hpp"

namespace clique {

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c; break;
        }
    }
    return out;
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const char* series_color(std::size_t i) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                              "#bcbd22", "#17becf"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

/// Tick step of 1, 2 or 5 times a power of ten.
inline double nice_step(double range, int target_ticks) {
    if (range <= 0.0) return 1.0;
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    return step * mag;
}

struct LinearScale {
    double domain_lo = 0.0, domain_hi = 1.0;
    double range_lo = 0.0, range_hi = 1.0;

    double operator()(double v) const {
        const double t = (v - domain_lo) / (domain_hi - domain_lo);
        return range_lo + t * (range_hi - range_lo);
    }

    std::vector<double> ticks(int target = 6) const {
        const double step = nice_step(domain_hi - domain_lo, target);
        std::vector<double> out;
        double t = std::ceil(domain_lo / step) * step;
        for (; t <= domain_hi + step * 1e-9; t += step) out.push_back(t == 0.0 ? 0.0 : t);
        return out;
    }
};

/// Pads a degenerate [lo, hi] domain so the scale stays invertible.
inline void pad_domain(double& lo, double& hi) {
    if (lo == hi) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        lo -= pad;
        hi += pad;
    } else {
        const double pad = (hi - lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
}

} // namespace detail

struct ScatterSeries {
    std::string label;
    std::vector<std::pair<double, double>> points; // (x, y)
};

struct ScatterPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ScatterSeries> series;
};

struct BoxGroup {
    std::string label;
    std::vector<double> values;
};

struct BoxPlot {
    std::string title;
    std::string y_label;
    std::vector<BoxGroup> groups;
};

namespace detail {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 64, kRight = 24, kTop = 44, kBottom = 52;

inline void svg_header(std::ostringstream& os) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";
}

inline void draw_title(std::ostringstream& os, const std::string& title) {
    if (title.empty()) return;
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
}

inline void draw_y_axis(std::ostringstream& os, const LinearScale& sy,
                        const std::string& label) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (const double t : sy.ticks()) {
        const double y = sy(t);
        os << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft
           << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
           << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kRight
           << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n"
           << "<text x=\"" << kLeft - 7 << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
           << "</text>\n";
    }
    if (!label.empty())
        os << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2 << ")\">"
           << xml_escape(label) << "</text>\n";
}

inline void draw_x_axis_line(std::ostringstream& os) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
       << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
}

} // namespace detail

/// Scatter plot, one colored dot set per series, legend included.
inline std::string render_scatter(const ScatterPlot& plot) {
    using namespace detail;
    std::size_t total = 0;
    for (const auto& s : plot.series) total += s.points.size();
    if (total == 0) throw ValidationError("scatter plot: empty selection, nothing to plot");

    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool first = true;
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            if (first) {
                xlo = xhi = x;
                ylo = yhi = y;
                first = false;
            }
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    pad_domain(xlo, xhi);
    pad_domain(ylo, yhi);
    const LinearScale sx{xlo, xhi, kLeft, kWidth - kRight};
    const LinearScale sy{ylo, yhi, kHeight - kBottom, kTop};

    std::ostringstream os;
    svg_header(os);
    draw_title(os, plot.title);
    draw_y_axis(os, sy, plot.y_label);
    draw_x_axis_line(os);
    for (const double t : sx.ticks()) {
        const double x = sx(t);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << num(x)
           << "\" y2=\"" << kHeight - kBottom + 4 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(x) << "\" y=\"" << kHeight - kBottom + 17
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
           << "</text>\n";
    }
    if (!plot.x_label.empty())
        os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 14
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           << xml_escape(plot.x_label) << "</text>\n";

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        os << "<g fill=\"" << series_color(si) << "\" fill-opacity=\"0.75\">\n";
        for (const auto& [x, y] : plot.series[si].points)
            os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\"/>\n";
        os << "</g>\n";
    }

    // Legend, top right.
    double ly = kTop + 8;
    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const double lx = kWidth - kRight - 150;
        os << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
           << series_color(si) << "\"/>\n"
           << "<text x=\"" << lx + 15 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << xml_escape(plot.series[si].label) << "</text>\n";
        ly += 17;
    }
    os << "</svg>\n";
    return os.str();
}

/// Grouped boxplot; whiskers always extend to the group min and max, so
/// classically defined outliers are inside the whiskers, not drawn apart.
inline std::string render_boxplot(const BoxPlot& plot) {
    using namespace detail;
    std::vector<const BoxGroup*> groups;
    for (const auto& g : plot.groups)
        if (!g.values.empty()) groups.push_back(&g);
    if (groups.empty()) throw ValidationError("boxplot: empty selection, nothing to plot");

    double ylo = groups[0]->values[0], yhi = ylo;
    for (const auto* g : groups)
        for (const double v : g->values) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    pad_domain(ylo, yhi);
    const LinearScale sy{ylo, yhi, kHeight - kBottom, kTop};

    std::ostringstream os;
    svg_header(os);
    draw_title(os, plot.title);
    draw_y_axis(os, sy, plot.y_label);
    draw_x_axis_line(os);

    const double span = kWidth - kLeft - kRight;
    const double slot = span / static_cast<double>(groups.size());
    const double box_w = std::min(60.0, slot * 0.5);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const ColumnStats st = column_stats(groups[gi]->values);
        const double cx = kLeft + slot * (static_cast<double>(gi) + 0.5);
        const char* color = series_color(gi);
        const double y_min = sy(st.min), y_max = sy(st.max);
        const double y_q1 = sy(st.q1), y_q3 = sy(st.q3), y_med = sy(st.median);
        // whiskers to min/max
        os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y_max) << "\" x2=\"" << num(cx)
           << "\" y2=\"" << num(y_q3) << "\" stroke=\"black\"/>\n"
           << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y_q1) << "\" x2=\"" << num(cx)
           << "\" y2=\"" << num(y_min) << "\" stroke=\"black\"/>\n"
           << "<line x1=\"" << num(cx - box_w / 4) << "\" y1=\"" << num(y_max) << "\" x2=\""
           << num(cx + box_w / 4) << "\" y2=\"" << num(y_max) << "\" stroke=\"black\"/>\n"
           << "<line x1=\"" << num(cx - box_w / 4) << "\" y1=\"" << num(y_min) << "\" x2=\""
           << num(cx + box_w / 4) << "\" y2=\"" << num(y_min) << "\" stroke=\"black\"/>\n";
        os << "<rect x=\"" << num(cx - box_w / 2) << "\" y=\"" << num(y_q3) << "\" width=\""
           << num(box_w) << "\" height=\"" << num(std::max(0.0, y_q1 - y_q3)) << "\" fill=\""
           << color << "\" fill-opacity=\"0.5\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << num(cx - box_w / 2) << "\" y1=\"" << num(y_med) << "\" x2=\""
           << num(cx + box_w / 2) << "\" y2=\"" << num(y_med)
           << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << num(cx) << "\" y=\"" << kHeight - kBottom + 17
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << xml_escape(groups[gi]->label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void write_svg(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << content;
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace clique
