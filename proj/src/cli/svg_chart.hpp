#pragma once

#include <string>
#include <vector>

namespace hazardlens::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // non-finite points break the polyline
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    double y_cap = 0.0;  // > 0 clips the y axis at this value
};

/// Self-contained SVG line chart: axes with ticks, one polyline per series,
/// and a legend.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& options);

}  // namespace hazardlens::cli
