#include "fmab/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fmab {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("Table: no columns");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("Table: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string Table::format_cell(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
  return std::get<std::string>(cell);
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out << ',';
    out << columns_[c];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_cell(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string Table::to_json() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json item;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      if (std::holds_alternative<double>(cell)) {
        item[columns_[c]] = std::get<double>(cell);
      } else if (std::holds_alternative<long long>(cell)) {
        item[columns_[c]] = std::get<long long>(cell);
      } else {
        item[columns_[c]] = std::get<std::string>(cell);
      }
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(2);
}

void export_table(const Table& table, const std::string& path, ExportFormat format) {
  write_text_file(path, format == ExportFormat::Csv ? table.to_csv() : table.to_json());
}

Table import_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("import_csv: empty file: " + path);
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ls(s);
    while (std::getline(ls, part, ',')) parts.push_back(part);
    if (!s.empty() && s.back() == ',') parts.emplace_back();
    return parts;
  };
  Table table(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Table::Cell> row;
    for (auto& cell : split(line)) row.emplace_back(std::move(cell));
    table.add_row(std::move(row));
  }
  return table;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fmab
