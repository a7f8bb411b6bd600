#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace isolab {

/// Shortest decimal form with up to 16 significant digits; all numeric output
/// goes through this so reports are byte-reproducible.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", x);
    return buf;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

} // namespace isolab
