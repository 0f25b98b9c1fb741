#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pinnosc::csv {

// Shortest decimal form that round-trips to the same double ("%.17g" style,
// trimmed). parse(format(x)) == x bit for bit.
std::string format_double(double v);
double parse_double(const std::string& text);

struct Table {
    std::string header;
    std::vector<std::vector<double>> rows;
};

void write_table(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::vector<double>>& rows);
Table read_table(const std::filesystem::path& path);

}  // namespace pinnosc::csv
