#pragma once

#include <string>
#include <variant>
#include <vector>

namespace bistatic::csv {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws LengthMismatchError when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

// Numbers are written in decimal notation with 12 significant digits.
std::string format_number(double x);

// UTF-8, header row, LF line endings. Throws IoError on an empty table or an
// unwritable path; nothing is created on error.
void emit_csv(const Table& table, const std::string& path);

// Reads a CSV written by emit_csv; every cell comes back as a string so a
// re-emit reproduces the file byte-exactly.
Table parse_csv(const std::string& path);

}  // namespace bistatic::csv
