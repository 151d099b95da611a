#pragma once

// Result files. CSV tables carry the config hash as a leading comment line
// and name their units in the header ("G [1/um]"). Numbers are written with
// %.12g and rows keep insertion order, so equal inputs give equal bytes.

#include <filesystem>
#include <string>
#include <vector>

namespace chemokin {

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless
};

class ResultTable {
 public:
  explicit ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t rows() const { return cells_.size(); }

  /// Cells are numbers or short text (status flags); a NaN is written empty.
  struct Cell {
    Cell(double v) : num(v) {}
    Cell(int v) : num(v) {}
    Cell(unsigned long v) : num(static_cast<double>(v)) {}
    Cell(unsigned long long v) : num(static_cast<double>(v)) {}
    Cell(const char* s) : text(s), is_text(true) {}
    Cell(std::string s) : text(std::move(s)), is_text(true) {}
    double num = 0.0;
    std::string text;
    bool is_text = false;
  };
  void add_row(std::vector<Cell> row);

  std::string to_csv(const std::string& config_hash) const;
  void write_csv(const std::filesystem::path& path, const std::string& config_hash) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> cells_;
};

std::string format_number(double v);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace chemokin
