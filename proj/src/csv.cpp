#include "tscale/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tscale/error.hpp"
#include "tscale/version.hpp"

namespace tscale::csv {

void write_header(std::ostream& os, unsigned long long seed, const std::string& digest,
                  const std::vector<std::string>& extra) {
    os << "# ts " << kVersion << '\n';
    os << "# seed " << seed << '\n';
    os << "# config " << digest << '\n';
    for (const auto& line : extra) os << "# " << line << '\n';
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        if (b == std::string::npos) return false;
        const char* first = cell.data() + b;
        const char* last = cell.data() + e + 1;
        double v = 0.0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) return false;
        out.push_back(v);
    }
    return !out.empty();
}

}  // namespace

std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::HistoryGap, "cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::vector<double> row;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (parse_row(line, row)) {
            rows.push_back(row);
        } else if (!first) {
            throw Error(Errc::HistoryGap, path.string() + ":" + std::to_string(lineno) + ": not a numeric row");
        }
        first = false;
    }
    return rows;
}

std::pair<std::vector<double>, std::vector<double>> read_table(const std::filesystem::path& path) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& r : read_numeric(path)) {
        if (r.size() < 2) throw Error(Errc::HistoryGap, path.string() + ": rows need two columns (t, v)");
        out.first.push_back(r[0]);
        out.second.push_back(r[1]);
    }
    return out;
}

}  // namespace tscale::csv
