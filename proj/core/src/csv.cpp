#include "jcopen/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "jcopen/errors.hpp"

namespace jcopen::csv {

std::string format(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write(const std::filesystem::path& path, const Table& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format(row[i]);
        }
        os << '\n';
    }
    if (!os) throw Error("write failed for " + path.string());
}

Table read(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    Table table;
    std::string line;
    if (!std::getline(is, line)) return table;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            double v = 0.0;
            auto res = std::from_chars(line.data() + pos, line.data() + next, v);
            if (res.ec != std::errc()) {
                throw Error("malformed number in " + path.string() + ": " + line);
            }
            row.push_back(v);
            pos = next + 1;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace jcopen::csv
