#include "pmld/csv.hpp"

#include <cstdio>
#include <fstream>

#include "pmld/errors.hpp"

namespace pmld::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_table(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgumentError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format(row[i]);
        }
        out << '\n';
    }
}

}  // namespace pmld::csv
