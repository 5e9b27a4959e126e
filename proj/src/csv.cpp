#include "bistatic/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bistatic/errors.hpp"

namespace bistatic::csv {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw LengthMismatchError("table row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (!std::isfinite(x)) throw IoError("csv: non-finite value");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {
std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}
}  // namespace

void emit_csv(const Table& table, const std::string& path) {
  if (table.columns.empty() || table.rows.empty()) {
    throw IoError("csv: refusing to write empty table: " + path);
  }
  std::ostringstream out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << cell_text(row[i]);
    }
    out << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("csv: cannot open for writing: " + path);
  f << out.str();
  if (!f) throw IoError("csv: write failed: " + path);
}

Table parse_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("csv: cannot open for reading: " + path);
  Table t;
  std::string line;
  bool header = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.empty() || line.back() == ',') fields.push_back("");
    if (header) {
      t.columns = fields;
      header = false;
    } else {
      std::vector<Cell> row;
      row.reserve(fields.size());
      for (auto& s : fields) row.emplace_back(std::move(s));
      t.add_row(std::move(row));
    }
  }
  return t;
}

}  // namespace bistatic::csv
