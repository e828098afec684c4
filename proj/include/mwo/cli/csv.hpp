#pragma once

#include <string>
#include <vector>

namespace mwo::cli {

// A headed CSV in the tool's own dialect (',' separator, LF, no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws ConfigError naming the column when absent. Empty cells read as NaN.
  std::vector<double> column(const std::string& name) const;
  bool has(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "csv");

}  // namespace mwo::cli
