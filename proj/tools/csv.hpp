#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace prcg_cli {

// Scientific notation, 17 significant digits; "inf"/"nan" spelled out.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  size_t rows() const { return rows_.size(); }

  // Cells are written verbatim; they must not contain commas or newlines.
  void add_row(std::vector<std::string> cells);

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes `contents` to a temporary file next to `path`, then renames it over
// `path`. Throws std::runtime_error on I/O failure; `path` is untouched then.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace prcg_cli
