#pragma once

#include <string>
#include <vector>

namespace pmld::csv {

// Shortest round-trip decimal form; keeps identical bytes across runs.
std::string format(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_table(const std::string& path, const Table& table);

}  // namespace pmld::csv
