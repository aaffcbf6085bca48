#pragma once

#include <string>
#include <vector>

namespace pmld::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal deterministic polyline plot (axes box, series in fixed colors).
void write_plot(const std::string& path, const std::string& title,
                const std::vector<Series>& series);

}  // namespace pmld::svg
