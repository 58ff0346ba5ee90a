#pragma once

#include <string>
#include <vector>

namespace quorum {

/// One polyline on a chart. When band_low/band_high are filled (same length
/// as x/y) a shaded confidence band is drawn behind the line.
struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band_low;
    std::vector<double> band_high;
    bool markers = true;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 860;
    int height = 520;
};

/// Writes a standalone SVG line chart; no display server involved.
void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series);

} // namespace quorum
