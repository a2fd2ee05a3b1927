#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttg {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CellKind { Numeric, Text, Empty };

struct Cell {
  CellKind kind = CellKind::Empty;
  double numeric_value = 0.0;  // meaningful iff kind == Numeric
  std::string raw_text;        // byte-exact input
  std::string unit;            // trailing unit token, e.g. "%" or "万人"

  bool is_numeric() const { return kind == CellKind::Numeric; }
};

// Parses one content cell. A cell is numeric iff, after trimming whitespace
// and at most one trailing non-digit unit token, the remainder is a signed
// decimal number.
Cell parse_cell(const std::string& raw);

struct Table {
  std::vector<std::string> row_headers;
  std::vector<std::string> col_headers;
  std::vector<std::vector<Cell>> cells;  // rows x cols
  std::string caption;

  std::size_t rows() const { return row_headers.size(); }
  std::size_t cols() const { return col_headers.size(); }
  bool all_content_numeric() const;
};

enum class Axis { Row, Column };

struct Series {
  Axis axis = Axis::Row;
  std::size_t index = 0;
  std::string label;
  std::vector<std::string> point_labels;  // opposite-axis headers
  std::vector<Cell> values;               // table order, never sorted

  bool all_numeric() const;
};

// Corpus record: {"caption": str?, "row_headers": [str], "col_headers": [str],
// "cells": [[str]]}. Ragged grids and empty headers raise SchemaError.
Table parse_table(const nlohmann::json& record);

nlohmann::json table_to_json(const Table& t);

// CSV import: first row = col_headers, first column = row_headers,
// cell (0,0) ignored. Handles double-quoted fields.
Table parse_csv_table(const std::string& csv_text);

Series extract_series(const Table& t, Axis axis, std::size_t index);

std::vector<Series> all_series(const Table& t);

// Linearization baseline: one "<row_header> at <col_header> is <raw>."
// sentence per content cell, row-major, joined by spaces.
std::string linearize(const Table& t);

// Fraction of tables whose every non-empty content cell is numeric.
double numeric_fraction(const std::vector<Table>& tables);

}  // namespace ttg
