#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dvq/cell.hpp"
#include "dvq/schema.hpp"

namespace dvq {

/// Rows of one table, cells in schema column order.
struct Table {
  TableDef def;
  std::vector<std::vector<Cell>> rows;
};

/// An immutable in-memory database: a schema plus one loaded table per
/// schema entry. Lookup is case-insensitive.
struct Database {
  Schema schema;
  std::map<std::string, Table> tables;  // keyed by lowercased name

  const Table* find_table(std::string_view name) const {
    auto it = tables.find(to_lower(name));
    return it == tables.end() ? nullptr : &it->second;
  }

  void add_table(Table table) {
    std::string key = to_lower(table.def.name);
    tables.insert_or_assign(std::move(key), std::move(table));
  }
};

namespace detail {

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes,
/// and line breaks. Returns one string vector per record.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text,
                                                       const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  size_t pos = 0;
  size_t line = 1;
  while (pos < text.size()) {
    std::vector<std::string> fields;
    while (true) {
      std::string field;
      if (pos < text.size() && text[pos] == '"') {
        ++pos;
        bool closed = false;
        while (pos < text.size()) {
          char c = text[pos];
          if (c == '"') {
            if (pos + 1 < text.size() && text[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++pos;
        }
        if (!closed) {
          throw std::runtime_error(origin + ": unterminated quoted field at line " +
                                   std::to_string(line));
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          field.push_back(text[pos]);
          ++pos;
        }
      }
      fields.push_back(std::move(field));
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    if (pos < text.size() && text[pos] == '\r') ++pos;
    if (pos < text.size() && text[pos] == '\n') {
      ++pos;
      ++line;
    }
    records.push_back(std::move(fields));
  }
  // a lone trailing newline is not an empty record
  if (!records.empty() && records.back().size() == 1 && records.back()[0].empty()) {
    records.pop_back();
  }
  return records;
}

inline Cell coerce_cell(const std::string& raw, ValueKind kind, const std::string& origin,
                        size_t row, const std::string& column) {
  if (raw.empty()) return Cell{};
  switch (kind) {
    case ValueKind::Nominal:
      return Cell{raw};
    case ValueKind::Quantitative: {
      double value = 0.0;
      const char* begin = raw.data();
      const char* end = raw.data() + raw.size();
      while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
      while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end || begin == end || !std::isfinite(value)) {
        throw std::runtime_error(origin + ": row " + std::to_string(row) + ", column " +
                                 column + ": '" + raw + "' is not a finite number");
      }
      return Cell{value};
    }
    case ValueKind::Temporal: {
      auto t = parse_temporal(raw);
      if (!t) {
        throw std::runtime_error(origin + ": row " + std::to_string(row) + ", column " +
                                 column + ": '" + raw + "' is not an ISO-8601 date or datetime");
      }
      return Cell{temporal_text(*t)};
    }
  }
  return Cell{};
}

inline Table table_from_csv(const TableDef& def, std::string_view text,
                            const std::string& origin) {
  auto records = parse_csv(text, origin);
  if (records.empty()) throw std::runtime_error(origin + ": missing header row");
  const auto& header = records[0];
  // map schema column -> CSV field position; names match case-insensitively, any order
  std::vector<size_t> position(def.columns.size(), SIZE_MAX);
  for (size_t c = 0; c < def.columns.size(); ++c) {
    for (size_t h = 0; h < header.size(); ++h) {
      if (iequals(header[h], def.columns[c].name)) {
        position[c] = h;
        break;
      }
    }
    if (position[c] == SIZE_MAX) {
      throw std::runtime_error(origin + ": header lacks schema column '" +
                               def.columns[c].name + "'");
    }
  }
  if (header.size() != def.columns.size()) {
    throw std::runtime_error(origin + ": header has " + std::to_string(header.size()) +
                             " columns, schema expects " + std::to_string(def.columns.size()));
  }
  Table table;
  table.def = def;
  table.rows.reserve(records.size() - 1);
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.size() != header.size()) {
      throw std::runtime_error(origin + ": row " + std::to_string(r + 1) + " has " +
                               std::to_string(record.size()) + " fields, expected " +
                               std::to_string(header.size()));
    }
    std::vector<Cell> row(def.columns.size());
    for (size_t c = 0; c < def.columns.size(); ++c) {
      row[c] = coerce_cell(record[position[c]], def.columns[c].kind, origin, r + 1,
                           def.columns[c].name);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace detail

/// Loads one CSV file per schema table. Headers must carry exactly the
/// schema's column names (any order, any case); empty fields load as
/// NULL; quantitative and temporal cells are validated and normalized.
inline Database load_csv(const Schema& schema,
                         const std::map<std::string, std::string>& files) {
  Database db;
  db.schema = schema;
  for (const auto& table_def : schema.tables) {
    auto it = files.end();
    for (auto probe = files.begin(); probe != files.end(); ++probe) {
      if (iequals(probe->first, table_def.name)) {
        it = probe;
        break;
      }
    }
    if (it == files.end()) {
      throw std::runtime_error("no CSV file given for table '" + table_def.name + "'");
    }
    std::string text = detail::read_file(it->second);
    db.add_table(detail::table_from_csv(table_def, text, it->second));
  }
  return db;
}

/// Loads a database directory: schema.json plus <TABLE>.csv per table.
inline Database load_database_dir(const std::filesystem::path& dir) {
  Schema schema = load_schema_file((dir / "schema.json").string());
  std::map<std::string, std::string> files;
  for (const auto& table : schema.tables) {
    files[table.name] = (dir / (table.name + ".csv")).string();
  }
  return load_csv(schema, files);
}

}  // namespace dvq
