#include "pmld/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pmld/errors.hpp"

namespace pmld::svg {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

void write_plot(const std::string& path, const std::string& title,
                const std::vector<Series>& series) {
    const double width = 640, height = 420, margin = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const auto sx = [&](double v) {
        return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    const auto sy = [&](double v) {
        return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgumentError("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out << "<polyline fill=\"none\" stroke=\"" << colors[i % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t p = 0; p < s.x.size(); ++p) {
            if (p) out << ' ';
            out << fmt(sx(s.x[p])) << ',' << fmt(sy(s.y[p]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16.0 * (i + 1)
            << "\" font-size=\"11\" fill=\"" << colors[i % 6] << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace pmld::svg
