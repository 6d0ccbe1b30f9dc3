#include "svg_chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hazardlens::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;
constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double fraction = raw / magnitude;
    const double nice = fraction < 1.5 ? 1.0 : fraction < 3.5 ? 2.0 : fraction < 7.5 ? 5.0 : 10.0;
    return nice * magnitude;
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartOptions& options) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_max = 0.0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            if (std::isfinite(s.y[i])) y_max = std::max(y_max, s.y[i]);
        }
    }
    if (!(x_min < x_max)) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (options.y_cap > 0.0) y_max = std::min(y_max, options.y_cap);
    if (!(y_max > 0.0)) y_max = 1.0;
    const double y_step = nice_step(y_max, 6);
    y_max = std::ceil(y_max / y_step) * y_step;
    const double x_step = nice_step(x_max - x_min, 6);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - std::min(y, y_max) / y_max * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(options.title) << "</text>\n";

    svg << "<g stroke=\"#000\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
    svg << "</g>\n";

    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
        svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
            << num(px(x)) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"#000\"/>"
            << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
    }
    for (double y = 0.0; y <= y_max + 1e-9 * y_step; y += y_step) {
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#000\"/>"
            << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
            << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    }
    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(options.x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << num(kTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(options.y_label)
        << "</text>\n";
    svg << "</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % kColors.size()];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
                    << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || s.y[i] < 0.0) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += num(px(s.x[i])) + "," + num(py(s.y[i]));
        }
        flush();

        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        const double lx = kLeft + plot_w - 190.0;
        svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hazardlens::cli
