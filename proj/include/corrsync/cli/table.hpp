#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace corrsync::cli {

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
  std::vector<std::string> provenance;  ///< free-form "key: value" header lines
  nlohmann::json config_echo;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// '#'-prefixed provenance, one header row, 17 significant digits.
void write_csv(std::ostream& os, const ResultTable& table);

/// Non-finite doubles are written as the strings "inf", "-inf", "nan".
void write_json(std::ostream& os, const ResultTable& table);

std::string format_double(double v);

}  // namespace corrsync::cli
