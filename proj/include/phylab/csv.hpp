#ifndef PHYLAB_CSV_HPP
#define PHYLAB_CSV_HPP

#include <string>
#include <vector>

namespace phylab {

// Numeric cell formatting used by every writer ("%.10g"), so output files
// are stable across platforms and runs.
std::string csv_num(double v);

struct CsvTable {
  std::vector<std::string> comments;  // emitted as leading "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Plain comma-separated output; fields must not contain commas, quotes, or
// newlines (throws std::invalid_argument if one does). Rows must match the
// header width.
void write_csv(const std::string& path, const CsvTable& table);

// Reads a file written by write_csv. Throws std::runtime_error on I/O
// failure or ragged rows.
CsvTable read_csv(const std::string& path);

}  // namespace phylab

#endif  // PHYLAB_CSV_HPP
