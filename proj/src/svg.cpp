#include "bubble/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bubble {

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series) {
    const double W = 720, H = 480, L = 70, R = 20, T = 40, B = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_svg_chart: cannot open " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n", L, H - B, W - R,
                  H - B);
    out << buf;
    std::snprintf(buf, sizeof buf, "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n", L,
                  T, L, H - B);
    out << buf;
    for (int k = 0; k <= 5; ++k) {
        double xv = xmin + k * (xmax - xmin) / 5.0;
        double yv = ymin + k * (ymax - ymin) / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<text x='%g' y='%g' text-anchor='middle' font-size='11'>%.4g</text>\n",
                      px(xv), H - B + 18, xv);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x='%g' y='%g' text-anchor='end' font-size='11'>%.4g</text>\n", L - 6,
                      py(yv) + 4, yv);
        out << buf;
    }
    int li = 0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6g,%.6g ", px(s.x[i]), py(s.y[i]));
            out << buf;
        }
        out << "'/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x='%g' y='%g' font-size='12' fill='%s'>%s</text>\n", W - R - 150.0,
                      T + 16.0 * ++li, s.color.c_str(), s.label.c_str());
        out << buf;
    }
    out << "</svg>\n";
}

}  // namespace bubble
