#pragma once

#include <charconv>
#include <string>

#include "dvq/ast.hpp"

namespace dvq {

/// Shortest decimal text that round-trips back to the same double.
inline std::string number_text(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

/// Double-quotes a name, doubling embedded quotes.
inline std::string ident_text(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string column_text(const ColumnRef& ref) {
  if (ref.table) return ident_text(*ref.table) + "." + ident_text(ref.column);
  return ident_text(ref.column);
}

inline std::string literal_text(const Literal& lit) {
  if (const auto* num = std::get_if<double>(&lit)) return number_text(*num);
  return ident_text(std::get<std::string>(lit));
}

inline std::string select_item_text(const SelectItem& item) {
  if (const auto* col = std::get_if<ColumnRef>(&item)) return column_text(*col);
  const auto& agg = std::get<Aggregate>(item);
  std::string out = to_string(agg.func);
  out.push_back('(');
  if (!agg.column) {
    out.push_back('*');
  } else {
    if (agg.distinct) out += "DISTINCT ";
    out += column_text(*agg.column);
  }
  out.push_back(')');
  return out;
}

inline std::string condition_text(const Condition& cond) {
  return column_text(cond.column) + " " + to_string(cond.op) + " " + literal_text(cond.value);
}

inline std::string order_item_text(const OrderItem& item) {
  return select_item_text(item.expr) + (item.descending ? " DESC" : " ASC");
}

namespace detail {

inline void append_sql_core(std::string& out, const SqlCore& core) {
  out += "SELECT ";
  out += select_item_text(core.select[0]);
  out += ", ";
  out += select_item_text(core.select[1]);
  out += " FROM ";
  out += ident_text(core.from);
  for (const auto& join : core.joins) {
    out += " JOIN ";
    out += ident_text(join.table);
    out += " ON ";
    out += column_text(join.left);
    out += " = ";
    out += column_text(join.right);
  }
  if (!core.where.empty()) {
    out += " WHERE ";
    for (size_t i = 0; i < core.where.size(); ++i) {
      if (i) out += " AND ";
      out += condition_text(core.where[i]);
    }
  }
  if (!core.group_by.empty()) {
    out += " GROUP BY ";
    for (size_t i = 0; i < core.group_by.size(); ++i) {
      if (i) out += ", ";
      out += column_text(core.group_by[i]);
    }
  }
  if (!core.having.empty()) {
    out += " HAVING ";
    for (size_t i = 0; i < core.having.size(); ++i) {
      if (i) out += " AND ";
      out += condition_text(core.having[i]);
    }
  }
  if (!core.order_by.empty()) {
    out += " ORDER BY ";
    for (size_t i = 0; i < core.order_by.size(); ++i) {
      if (i) out += ", ";
      out += order_item_text(core.order_by[i]);
    }
  }
  if (core.limit) {
    out += " LIMIT ";
    out += std::to_string(*core.limit);
  }
}

}  // namespace detail

/// Canonical single-line form of a bare SQL core.
inline std::string print_sql_core(const SqlCore& core) {
  std::string out;
  detail::append_sql_core(out, core);
  return out;
}

/// Deterministic single-line canonical form. Keywords uppercase (the
/// leading `Visualize` keeps its mixed-case spelling), identifiers and
/// string literals double-quoted, clauses emitted in fixed order.
inline std::string print_canonical(const DvqAst& ast) {
  std::string out = "Visualize ";
  out += to_string(ast.chart);
  out.push_back(' ');
  detail::append_sql_core(out, ast.core);
  if (ast.bin) {
    out += " BIN ";
    out += column_text(ast.bin->column);
    out += " BY ";
    out += to_string(ast.bin->unit);
  }
  return out;
}

}  // namespace dvq
