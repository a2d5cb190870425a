#include "rqbm/cli/table.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rqbm/errors.hpp"

namespace rqbm::cli {

namespace {

nlohmann::ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + text +
                     "'");
  }
  return value;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw InputError("--format must be csv or json, got '" + name + "'");
}

std::string extension(Format format) { return format == Format::Csv ? ".csv" : ".json"; }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row has " + std::to_string(row.size()) + " cells for " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string short_number(double value) { return fmt::format("{}", value); }

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.17g}", v);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

std::string render(const Table& table, Format format) {
  if (format == Format::Json) {
    nlohmann::ordered_json doc;
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      auto record = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size(); ++c) record[table.columns[c]] = to_json(row[c]);
      rows.push_back(std::move(record));
    }
    doc["rows"] = std::move(rows);
    if (!table.meta.empty()) {
      auto meta = nlohmann::ordered_json::object();
      for (const auto& [key, value] : table.meta) meta[key] = to_json(value);
      doc["meta"] = std::move(meta);
    }
    return doc.dump(1) + "\n";
  }
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  for (const auto& [key, value] : table.meta) out += "# " + key + "=" + format_cell(value) + "\n";
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw InputError("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place at " + path.string());
  }
}

std::vector<double> NumericTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
  }
  throw InputError("missing column '" + name + "'");
}

NumericTable read_numeric_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  NumericTable table;

  if (path.extension() == ".json") {
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(in);
      table.columns = doc.at("columns").get<std::vector<std::string>>();
      for (const auto& record : doc.at("rows")) {
        std::vector<double> row;
        for (const auto& name : table.columns) {
          const auto& v = record.at(name);
          row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        }
        table.rows.push_back(std::move(row));
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    return table;
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (table.columns.empty()) {
      table.columns = fields;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.columns.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_cell(f, path, line_no));
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw InputError(path.string() + ": empty file");
  return table;
}

}  // namespace rqbm::cli
