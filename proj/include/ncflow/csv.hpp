#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ncflow::csv {

/// Locale-independent shortest-safe formatting: 17 significant digits, so a
/// value read back with parse_double is bit-identical.
std::string format_double(double value);
double parse_double(std::string_view text);

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

/// Writes header and rows separated by ',' with '\n' line endings. Throws
/// IoError on failure.
void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);

} // namespace ncflow::csv
