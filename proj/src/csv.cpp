#include "phylab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phylab {

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

void check_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") != std::string::npos)
    throw std::invalid_argument("csv field contains a delimiter: '" + f + "'");
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    check_field(fields[i]);
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& c : table.comments) out << "# " << c << '\n';
  out << join(table.header) << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv row width " + std::to_string(row.size()) +
                                  " != header width " + std::to_string(table.header.size()));
    out << join(row) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t start = line.find_first_not_of(" \t", 1);
      table.comments.push_back(start == std::string::npos ? "" : line.substr(start));
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size())
        throw std::runtime_error("ragged csv row in " + path);
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace phylab
