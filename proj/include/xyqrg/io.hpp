// Deterministic table serialization: CSV with a schema header line and a JSON
// mirror with identical field names.  Doubles are rendered with the shortest
// representation that round-trips exactly, so equal runs produce equal bytes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace xyqrg {

std::string format_double(double v);
double parse_double(const std::string& s);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// First line "# schema=1", then a header row, then data rows.
std::string to_csv(const Table& t);

// {"schema": 1, "rows": [...]} with one object per row; non-finite doubles
// are emitted as null.
std::string to_json(const Table& t);

// Inverse of to_csv up to cell types: every parsed cell is a string holding
// the exact serialized text, so to_csv(parse_csv(s)) == s.
Table parse_csv(const std::string& text);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace xyqrg
