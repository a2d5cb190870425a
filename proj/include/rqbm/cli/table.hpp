#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rqbm::cli {

/// Empty, real, integer or text cell. Empty cells are blank in CSV and null
/// in JSON.
using Cell = std::variant<std::monostate, double, long long, std::string>;

enum class Format { Csv, Json };

Format parse_format(const std::string& name);
std::string extension(Format format);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Run summary; CSV writes it as trailing "# key=value" lines, JSON as "meta".
  std::vector<std::pair<std::string, Cell>> meta;

  void add_row(std::vector<Cell> row);
};

/// Shortest decimal that round-trips, for file names.
std::string short_number(double value);

/// 17 significant digits.
std::string format_cell(const Cell& cell);

std::string render(const Table& table, Format format);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Reads a table written by render(); numeric cells only (blank -> NaN).
struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

NumericTable read_numeric_table(const std::filesystem::path& path);

}  // namespace rqbm::cli
