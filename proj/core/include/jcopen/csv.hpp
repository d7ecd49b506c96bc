// csv.hpp: minimal numeric CSV writer/reader used for exported data

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace jcopen::csv {

// '%.17g' formatting: enough digits to round-trip any double.
std::string format(double x);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);

} // namespace jcopen::csv
