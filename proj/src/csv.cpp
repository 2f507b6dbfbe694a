#include "ncflow/csv.hpp"

#include "ncflow/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ncflow::csv {

std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc())
    throw IoError("failed to format a number");
  return {buf.data(), ptr};
}

double parse_double(std::string_view text)
{
  if (text == "nan")
    return std::nan("");
  if (text == "inf")
    return std::numeric_limits<double>::infinity();
  if (text == "-inf")
    return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("not a number: '" + std::string(text) + "'");
  return v;
}

std::size_t Table::column(std::string_view name) const
{
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name)
      return c;
  throw ParseError("missing CSV column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const
{
  return parse_double(rows.at(row).at(column(name)));
}

namespace {

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

void write_line(std::ostream& os, const std::vector<std::string>& cells)
{
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c)
      os << ',';
    os << cells[c];
  }
  os << '\n';
}

} // namespace

void write(const std::filesystem::path& path, const Table& table)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot open '" + path.string() + "' for writing");
  write_line(os, table.header);
  for (const auto& row : table.rows)
    write_line(os, row);
  os.flush();
  if (!os)
    throw IoError("failed writing '" + path.string() + "'");
}

Table read(const std::filesystem::path& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  if (!std::getline(is, line))
    throw ParseError("empty CSV file '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  t.header = split(line);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    auto cells = split(line);
    if (cells.size() != t.header.size())
      throw ParseError("row with " + std::to_string(cells.size()) + " cells in '" +
                       path.string() + "', expected " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

} // namespace ncflow::csv
