#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fmab {

// Column-named table of numeric/text cells, the common currency of the
// harness suites. Doubles serialize with 17 significant digits so re-imports
// reproduce values exactly.
class Table {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  void add_row(std::vector<Cell> row);

  std::string to_csv() const;
  std::string to_json() const;

  static std::string format_cell(const Cell& cell);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

enum class ExportFormat { Csv, Json };

// Writes the table to path; I/O failures surface with the path in the message.
void export_table(const Table& table, const std::string& path, ExportFormat format);

// Re-reads a CSV produced by export_table; cells come back as strings.
Table import_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a over the file contents, for output manifests.
std::uint64_t fnv1a_hash(const std::string& bytes);

std::string format_double(double value);  // 17 significant digits

}  // namespace fmab
