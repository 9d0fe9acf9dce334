#pragma once

#include <string>
#include <vector>

namespace imputeval {

// Minimal CSV: comma-separated, UTF-8, no quoting, '.' decimal separator.
// Empty field = missing. Handles trailing \r from CRLF files.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
std::vector<std::string> split_csv_line(const std::string& line);

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace imputeval
