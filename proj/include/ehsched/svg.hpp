#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehsched {

struct SvgSeries {
    std::string label;
    std::vector<double> y;  // sampled at x = 0, 1, 2, ...
};

/// Minimal multi-series line chart; enough to eyeball convergence curves
/// without pulling in a plotting stack.
inline std::string render_line_chart(const std::string& title,
                                     const std::vector<SvgSeries>& series,
                                     int width = 900, int height = 460) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#7f7f7f"};
    const double ml = 70, mr = 20, mt = 40, mb = 40;
    double lo = 0, hi = 1;
    std::size_t n = 0;
    bool any = false;
    for (const auto& s : series)
        for (double v : s.y) {
            if (!any) lo = hi = v, any = true;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    for (const auto& s : series) n = std::max(n, s.y.size());
    if (!any || n < 2) throw std::invalid_argument("render_line_chart: empty");
    if (hi == lo) hi = lo + 1;

    auto px = [&](double i) {
        return ml + (width - ml - mr) * i / static_cast<double>(n - 1);
    };
    auto py = [&](double v) {
        return height - mb - (height - mt - mb) * (v - lo) / (hi - lo);
    };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
        << "' height='" << height << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
        << "font-family='sans-serif' font-size='16'>" << title << "</text>\n";
    // Axes and bounds labels.
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
        << height - mb << "' stroke='black'/>\n"
        << "<line x1='" << ml << "' y1='" << height - mb << "' x2='"
        << width - mr << "' y2='" << height - mb << "' stroke='black'/>\n";
    auto label = [&](double x, double y, const std::string& text,
                     const char* anchor) {
        out << "<text x='" << x << "' y='" << y << "' text-anchor='" << anchor
            << "' font-family='sans-serif' font-size='11'>" << text
            << "</text>\n";
    };
    std::ostringstream lofmt, hifmt;
    lofmt.precision(4);
    hifmt.precision(4);
    lofmt << lo;
    hifmt << hi;
    label(ml - 6, height - mb, lofmt.str(), "end");
    label(ml - 6, mt + 10, hifmt.str(), "end");
    label(ml, height - mb + 16, "0", "middle");
    label(width - mr, height - mb + 16, std::to_string(n - 1), "end");

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.y.size() < 2) continue;
        out << "<polyline fill='none' stroke='"
            << kColors[si % (sizeof(kColors) / sizeof(kColors[0]))]
            << "' stroke-width='1.2' points='";
        // Downsample long runs so files stay small.
        const std::size_t stride = std::max<std::size_t>(1, s.y.size() / 2000);
        for (std::size_t i = 0; i < s.y.size(); i += stride)
            out << px(static_cast<double>(i)) << ","
                << py(s.y[i]) << " ";
        out << px(static_cast<double>(s.y.size() - 1)) << ","
            << py(s.y.back()) << "'/>\n";
        label(width - mr - 4, mt + 14 + 14 * static_cast<double>(si),
              s.label, "end");
        out << "<rect x='" << width - mr - 120 << "' y='"
            << mt + 6 + 14 * static_cast<double>(si)
            << "' width='10' height='4' fill='"
            << kColors[si % (sizeof(kColors) / sizeof(kColors[0]))]
            << "'/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline void write_svg_file(const std::string& path, const std::string& svg) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_svg_file: cannot open " + path);
    f << svg;
}

}  // namespace ehsched
