#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"

namespace dvq {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

struct ColumnDef {
  std::string name;
  ValueKind kind = ValueKind::Nominal;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;

  const ColumnDef* find_column(std::string_view col) const {
    for (const auto& c : columns) {
      if (iequals(c.name, col)) return &c;
    }
    return nullptr;
  }
};

/// Database schema: tables with typed columns. Names are unique
/// case-insensitively within their scope.
struct Schema {
  std::vector<TableDef> tables;

  const TableDef* find_table(std::string_view name) const {
    for (const auto& t : tables) {
      if (iequals(t.name, name)) return &t;
    }
    return nullptr;
  }

  /// Renders one line per table: "TABLE(col:kind, ...)". Used when a
  /// prompt template needs the schema as text.
  std::string describe() const {
    std::ostringstream os;
    for (const auto& t : tables) {
      os << t.name << "(";
      for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) os << ", ";
        os << t.columns[i].name << ":" << to_string(t.columns[i].kind);
      }
      os << ")\n";
    }
    return os.str();
  }
};

inline ValueKind value_kind_from_string(std::string_view s) {
  if (iequals(s, "nominal")) return ValueKind::Nominal;
  if (iequals(s, "quantitative")) return ValueKind::Quantitative;
  if (iequals(s, "temporal")) return ValueKind::Temporal;
  throw std::runtime_error("unknown value kind: " + std::string(s));
}

/// Parses the schema JSON object {tables: [{name, columns: [{name, kind}]}]}.
inline Schema schema_from_json(const nlohmann::json& j) {
  Schema schema;
  if (!j.is_object() || !j.contains("tables") || !j["tables"].is_array()) {
    throw std::runtime_error("schema JSON must be an object with a 'tables' array");
  }
  for (const auto& jt : j["tables"]) {
    TableDef table;
    table.name = jt.at("name").get<std::string>();
    for (const auto& jc : jt.at("columns")) {
      ColumnDef col;
      col.name = jc.at("name").get<std::string>();
      col.kind = value_kind_from_string(jc.at("kind").get<std::string>());
      table.columns.push_back(std::move(col));
    }
    schema.tables.push_back(std::move(table));
  }
  // Enforce case-insensitive uniqueness.
  for (size_t i = 0; i < schema.tables.size(); ++i) {
    for (size_t k = i + 1; k < schema.tables.size(); ++k) {
      if (iequals(schema.tables[i].name, schema.tables[k].name)) {
        throw std::runtime_error("duplicate table name: " + schema.tables[i].name);
      }
    }
    const auto& cols = schema.tables[i].columns;
    for (size_t a = 0; a < cols.size(); ++a) {
      for (size_t b = a + 1; b < cols.size(); ++b) {
        if (iequals(cols[a].name, cols[b].name)) {
          throw std::runtime_error("duplicate column " + cols[a].name + " in table " +
                                   schema.tables[i].name);
        }
      }
    }
  }
  return schema;
}

inline nlohmann::ordered_json schema_to_json(const Schema& schema) {
  nlohmann::ordered_json jt = nlohmann::ordered_json::array();
  for (const auto& t : schema.tables) {
    nlohmann::ordered_json jc = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) {
      jc.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
    }
    jt.push_back({{"name", t.name}, {"columns", jc}});
  }
  return nlohmann::ordered_json{{"tables", jt}};
}

inline Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  nlohmann::json j;
  in >> j;
  return schema_from_json(j);
}

}  // namespace dvq
