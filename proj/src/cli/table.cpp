#include "corrsync/cli/table.hpp"

#include <cmath>
#include <cstdio>

namespace corrsync::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ResultTable::add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }

namespace {

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const ResultTable& table) {
  os << "# config: " << table.config_echo.dump() << '\n';
  for (const auto& line : table.provenance) os << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << csv_cell(row[i]);
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const ResultTable& table) {
  nlohmann::json doc;
  doc["config"] = table.config_echo;
  doc["provenance"] = table.provenance;
  doc["columns"] = table.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

}  // namespace corrsync::cli
