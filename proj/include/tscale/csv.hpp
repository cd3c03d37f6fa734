#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace tscale::csv {

/// "# ts <version>", "# seed <n>", "# config <digest>", then any extra lines.
void write_header(std::ostream& os, unsigned long long seed, const std::string& digest,
                  const std::vector<std::string>& extra = {});

/// Numeric rows of a CSV file; '#' lines and a non-numeric first row are skipped.
std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path);

/// Two-column (t, v) table.
std::pair<std::vector<double>, std::vector<double>> read_table(const std::filesystem::path& path);

}  // namespace tscale::csv
