#include "mwo/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mwo/cli/config.hpp"

namespace mwo::cli {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

bool CsvTable::has(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError(name, "missing column");
  const auto c = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    const std::string& v = r[c];
    if (v.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(name, "non-numeric cell '" + v + "'");
    out.push_back(x);
  }
  return out;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw ConfigError(origin, "empty CSV (no header)");
  t.header = split_row(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != t.header.size())
      throw ConfigError(origin, "row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path);
}

}  // namespace mwo::cli
