#include "chemokin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "chemokin/error.hpp"

namespace chemokin {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::Internal, "ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                         std::to_string(columns_.size()));
  }
  cells_.push_back(std::move(row));
}

std::string ResultTable::to_csv(const std::string& config_hash) const {
  std::string out = "# config_hash: " + config_hash + "\n";
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c].name + " [" + columns_[c].unit + "]";
  }
  out += '\n';
  for (const auto& row : cells_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c].is_text ? row[c].text : format_number(row[c].num);
    }
    out += '\n';
  }
  return out;
}

void ResultTable::write_csv(const std::filesystem::path& path, const std::string& config_hash) const {
  write_text_file(path, to_csv(config_hash));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace chemokin
