#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"
#include "dvq/cell.hpp"
#include "dvq/execute.hpp"
#include "dvq/print.hpp"

namespace dvq {

inline const char* mark_of(ChartType type) {
  switch (type) {
    case ChartType::Bar: return "bar";
    case ChartType::Pie: return "arc";
    case ChartType::Line: return "line";
    case ChartType::Scatter: return "point";
  }
  return "point";
}

inline const char* time_unit_of(BinUnit unit) {
  switch (unit) {
    case BinUnit::Year: return "year";
    case BinUnit::Month: return "yearmonth";
    case BinUnit::Day: return "yearmonthdate";
    case BinUnit::Weekday: return "day";
  }
  return "year";
}

inline nlohmann::ordered_json cell_to_json(const Cell& cell) {
  switch (cell.index()) {
    case 1: return std::get<double>(cell);
    case 2: return std::get<std::string>(cell);
    case 3: return to_string(std::get<Weekday>(cell));
    default: return nullptr;
  }
}

inline nlohmann::ordered_json result_set_to_json(const ResultSet& rs) {
  nlohmann::ordered_json out;
  out["x_kind"] = to_string(rs.x_kind);
  out["y_kind"] = to_string(rs.y_kind);
  out["n_values"] = rs.n_values();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [x, y] : rs.rows) {
    rows.push_back(nlohmann::ordered_json::array({cell_to_json(x), cell_to_json(y)}));
  }
  out["rows"] = std::move(rows);
  return out;
}

/// One axis of a chart: the column (or aggregate) it shows, its value
/// kind, and the calendar granularity when the axis is binned.
struct Encoding {
  std::string field;
  ValueKind type = ValueKind::Nominal;
  std::optional<std::string> time_unit;
};

/// A lowered chart: everything a Vega-Lite document needs, with the
/// result data inlined so the emitted file is self-contained.
struct ChartSpec {
  ChartType chart = ChartType::Bar;
  Encoding x;
  Encoding y;
  std::vector<std::pair<Cell, Cell>> values;
  std::optional<std::string> title;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json doc;
    doc["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";
    if (title) doc["title"] = *title;
    auto records = nlohmann::ordered_json::array();
    for (const auto& [vx, vy] : values) {
      nlohmann::ordered_json record;
      record[x.field] = cell_to_json(vx);
      record[y.field] = cell_to_json(vy);
      records.push_back(std::move(record));
    }
    doc["data"]["values"] = std::move(records);
    doc["mark"] = mark_of(chart);
    auto encode = [](const Encoding& e) {
      nlohmann::ordered_json enc;
      enc["field"] = e.field;
      enc["type"] = to_string(e.type);
      if (e.time_unit) enc["timeUnit"] = *e.time_unit;
      return enc;
    };
    if (chart == ChartType::Pie) {
      doc["encoding"]["theta"] = encode(y);
      doc["encoding"]["color"] = encode(x);
    } else {
      doc["encoding"]["x"] = encode(x);
      doc["encoding"]["y"] = encode(y);
    }
    return doc;
  }
};

namespace detail {

/// Axis fields are the canonical select text with identifier quotes
/// stripped, e.g. COUNT("DAYS_STAY") becomes COUNT(DAYS_STAY).
inline std::string field_name(const SelectItem& item) {
  std::string text = select_item_text(item);
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '"') out.push_back(c);
  }
  return out;
}

inline bool is_binned_column(const SelectItem& item, const DvqAst& ast) {
  if (!ast.bin) return false;
  const auto* col = std::get_if<ColumnRef>(&item);
  if (!col) return false;
  if (!iequals(col->column, ast.bin->column.column)) return false;
  if (!col->table || !ast.bin->column.table) return true;
  return iequals(*col->table, *ast.bin->column.table);
}

}  // namespace detail

/// Lowers an executed query to its chart.
inline ChartSpec lower(const DvqAst& ast, const ResultSet& rs,
                       std::optional<std::string> title = std::nullopt) {
  ChartSpec spec;
  spec.chart = ast.chart;
  spec.x.field = detail::field_name(ast.core.select[0]);
  spec.x.type = rs.x_kind;
  spec.y.field = detail::field_name(ast.core.select[1]);
  spec.y.type = rs.y_kind;
  if (detail::is_binned_column(ast.core.select[0], ast)) {
    spec.x.time_unit = time_unit_of(ast.bin->unit);
  }
  if (detail::is_binned_column(ast.core.select[1], ast)) {
    spec.y.time_unit = time_unit_of(ast.bin->unit);
  }
  spec.values = rs.rows;
  spec.title = std::move(title);
  return spec;
}

}  // namespace dvq
