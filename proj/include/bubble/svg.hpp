#pragma once

#include <string>
#include <vector>

namespace bubble {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

/// Minimal polyline line chart (axes, ticks, legend).
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series);

}  // namespace bubble
