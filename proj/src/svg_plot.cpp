#include "quorum/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace quorum {

namespace {

constexpr const char* kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
};

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void cover(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape_xml(const std::string& text) {
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

} // namespace

void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write chart file: " + path);
    }

    const double margin_left = 70, margin_right = 150, margin_top = 45, margin_bottom = 55;
    const double plot_w = spec.width - margin_left - margin_right;
    const double plot_h = spec.height - margin_top - margin_bottom;

    Extent ex, ey;
    for (const Series& s : series) {
        for (double v : s.x) ex.cover(v);
        for (double v : s.y) ey.cover(v);
        for (double v : s.band_low) ey.cover(v);
        for (double v : s.band_high) ey.cover(v);
    }
    ex.pad();
    ey.pad();

    const auto px = [&](double v) {
        return margin_left + (v - ex.lo) / (ex.hi - ex.lo) * plot_w;
    };
    const auto py = [&](double v) {
        return margin_top + plot_h - (v - ey.lo) / (ey.hi - ey.lo) * plot_h;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << spec.width / 2.0 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"16\">" << escape_xml(spec.title) << "</text>\n";

    // Axes with 6 linear ticks each.
    out << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = ex.lo + (ex.hi - ex.lo) * i / 5.0;
        const double fy = ey.lo + (ey.hi - ey.lo) * i / 5.0;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << margin_top << "\" x2=\"" << px(fx)
            << "\" y2=\"" << margin_top + plot_h << "\"/>\n";
        out << "<line x1=\"" << margin_left << "\" y1=\"" << py(fy) << "\" x2=\""
            << margin_left + plot_w << "\" y2=\"" << py(fy) << "\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << margin_top + plot_h + 18
            << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" << fmt_tick(fx)
            << "</text>\n";
        out << "<text x=\"" << margin_left - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" << fmt_tick(fy)
            << "</text>\n";
    }
    out << "</g>\n";
    out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << margin_left + plot_w / 2.0 << "\" y=\"" << spec.height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(spec.x_label)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << margin_top + plot_h / 2.0
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << margin_top + plot_h / 2.0 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const Series& sr = series[s];
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (sr.band_low.size() == sr.x.size() && sr.band_high.size() == sr.x.size() &&
            !sr.x.empty()) {
            out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" "
                << "points=\"";
            for (std::size_t i = 0; i < sr.x.size(); ++i) {
                out << px(sr.x[i]) << ',' << py(sr.band_high[i]) << ' ';
            }
            for (std::size_t i = sr.x.size(); i-- > 0;) {
                out << px(sr.x[i]) << ',' << py(sr.band_low[i]) << ' ';
            }
            out << "\"/>\n";
        }
        if (sr.x.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" "
                << "points=\"";
            for (std::size_t i = 0; i < sr.x.size(); ++i) {
                out << px(sr.x[i]) << ',' << py(sr.y[i]) << ' ';
            }
            out << "\"/>\n";
        }
        if (sr.markers) {
            for (std::size_t i = 0; i < sr.x.size(); ++i) {
                out << "<circle cx=\"" << px(sr.x[i]) << "\" cy=\"" << py(sr.y[i])
                    << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
            }
        }
        const double ly = margin_top + 16 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << margin_left + plot_w + 10 << "\" y1=\"" << ly - 4
            << "\" x2=\"" << margin_left + plot_w + 34 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << margin_left + plot_w + 40 << "\" y=\"" << ly
            << "\" font-size=\"12\">" << escape_xml(sr.name) << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace quorum
