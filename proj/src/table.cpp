#include "ttg/table.hpp"

#include "ttg/text.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ttg {

namespace {

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Parses a signed decimal at the start of `s`; returns chars consumed (0 on
// failure) and writes the value.
std::size_t parse_signed_decimal(const std::string& s, double& value) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits_begin = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  bool int_part = i > digits_begin;
  if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t frac_begin = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (!int_part && i == frac_begin) return 0;
  } else if (!int_part) {
    return 0;
  }
  value = std::stod(s.substr(0, i));
  return i;
}

bool has_digit_or_space(const std::string& s) {
  for (unsigned char c : s)
    if (is_digit(c) || std::isspace(c)) return true;
  return false;
}

}  // namespace

Cell parse_cell(const std::string& raw) {
  Cell cell;
  cell.raw_text = raw;
  std::string body = trim(raw);
  if (body.empty()) {
    cell.kind = CellKind::Empty;
    return cell;
  }
  double value = 0.0;
  std::size_t consumed = parse_signed_decimal(body, value);
  if (consumed > 0 && std::isfinite(value)) {
    std::string rest = trim(body.substr(consumed));
    if (rest.empty()) {
      cell.kind = CellKind::Numeric;
      cell.numeric_value = value;
      return cell;
    }
    // At most one trailing unit token, free of digits.
    if (!has_digit_or_space(rest)) {
      cell.kind = CellKind::Numeric;
      cell.numeric_value = value;
      cell.unit = rest;
      return cell;
    }
  }
  cell.kind = CellKind::Text;
  return cell;
}

bool Table::all_content_numeric() const {
  for (const auto& row : cells)
    for (const auto& c : row)
      if (c.kind == CellKind::Text) return false;
  return true;
}

bool Series::all_numeric() const {
  for (const auto& c : values)
    if (!c.is_numeric()) return false;
  return true;
}

Table parse_table(const nlohmann::json& record) {
  if (!record.is_object()) throw SchemaError("table record must be an object");
  Table t;
  if (record.contains("caption") && !record["caption"].is_null())
    t.caption = record["caption"].get<std::string>();
  for (const char* key : {"row_headers", "col_headers", "cells"})
    if (!record.contains(key))
      throw SchemaError(std::string("table record missing \"") + key + "\"");
  t.row_headers = record["row_headers"].get<std::vector<std::string>>();
  t.col_headers = record["col_headers"].get<std::vector<std::string>>();
  if (t.row_headers.empty() || t.col_headers.empty())
    throw SchemaError("header lists must be non-empty");
  for (const auto& h : t.row_headers)
    if (h.empty()) throw SchemaError("empty row header");
  for (const auto& h : t.col_headers)
    if (h.empty()) throw SchemaError("empty column header");
  const auto& grid = record["cells"];
  if (!grid.is_array() || grid.size() != t.row_headers.size())
    throw SchemaError("cells must have one row per row header");
  for (const auto& row : grid) {
    if (!row.is_array() || row.size() != t.col_headers.size())
      throw SchemaError("ragged grid: every row needs one cell per column");
    std::vector<Cell> cells;
    cells.reserve(row.size());
    for (const auto& c : row) cells.push_back(parse_cell(c.get<std::string>()));
    t.cells.push_back(std::move(cells));
  }
  return t;
}

nlohmann::json table_to_json(const Table& t) {
  nlohmann::json record;
  if (!t.caption.empty()) record["caption"] = t.caption;
  record["row_headers"] = t.row_headers;
  record["col_headers"] = t.col_headers;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.cells) {
    auto r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(c.raw_text);
    rows.push_back(std::move(r));
  }
  record["cells"] = std::move(rows);
  return record;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Table parse_csv_table(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  nlohmann::json record;
  record["row_headers"] = nlohmann::json::array();
  record["col_headers"] = nlohmann::json::array();
  record["cells"] = nlohmann::json::array();
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      for (std::size_t j = 1; j < fields.size(); ++j)
        record["col_headers"].push_back(fields[j]);
      first = false;
    } else {
      if (fields.empty()) continue;
      record["row_headers"].push_back(fields[0]);
      auto row = nlohmann::json::array();
      for (std::size_t j = 1; j < fields.size(); ++j) row.push_back(fields[j]);
      record["cells"].push_back(std::move(row));
    }
  }
  return parse_table(record);
}

Series extract_series(const Table& t, Axis axis, std::size_t index) {
  Series s;
  s.axis = axis;
  s.index = index;
  if (axis == Axis::Row) {
    if (index >= t.rows()) throw std::out_of_range("row index out of range");
    s.label = t.row_headers[index];
    s.point_labels = t.col_headers;
    s.values = t.cells[index];
  } else {
    if (index >= t.cols()) throw std::out_of_range("column index out of range");
    s.label = t.col_headers[index];
    s.point_labels = t.row_headers;
    s.values.reserve(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i)
      s.values.push_back(t.cells[i][index]);
  }
  return s;
}

std::vector<Series> all_series(const Table& t) {
  std::vector<Series> out;
  for (std::size_t i = 0; i < t.rows(); ++i)
    out.push_back(extract_series(t, Axis::Row, i));
  for (std::size_t j = 0; j < t.cols(); ++j)
    out.push_back(extract_series(t, Axis::Column, j));
  return out;
}

std::string linearize(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!out.empty()) out += ' ';
      out += t.row_headers[i];
      out += " at ";
      out += t.col_headers[j];
      out += " is ";
      out += t.cells[i][j].raw_text;
      out += '.';
    }
  }
  return out;
}

double numeric_fraction(const std::vector<Table>& tables) {
  if (tables.empty()) throw std::invalid_argument("numeric_fraction: empty list");
  std::size_t numeric = 0;
  for (const auto& t : tables)
    if (t.all_content_numeric()) ++numeric;
  return static_cast<double>(numeric) / static_cast<double>(tables.size());
}

}  // namespace ttg
