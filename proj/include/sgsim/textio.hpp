#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace sgsim {

// Compact numeric text for CSV/report cells: 10 significant digits, %g style.
inline std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Full round-trip precision (design matrices, model files).
inline std::string fmt_num17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& cells, char sep = ',') {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(sep);
        out += cells[i];
    }
    return out;
}

// Split one CSV line; no quoting support, which is fine for the numeric and
// path-like cells this project emits.
std::vector<std::string> split_csv_line(const std::string& line);

// Whole-file helpers. write_text_file creates parent directories.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sgsim
