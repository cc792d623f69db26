#pragma once

#include <string>
#include <vector>

namespace riccati::lab {

// One polyline. Points with non-finite coordinates (or non-positive y on a
// log axis) break the line. An empty color picks from the default palette;
// an empty label keeps the series out of the legend.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    double stroke_width = 1.3;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 860;
    int height = 520;
};

// Minimal self-contained SVG 1.1 line plot: axes, tick marks and labels,
// legend, polylines. Throws std::runtime_error when nothing is plottable or
// the file cannot be written.
void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace riccati::lab
