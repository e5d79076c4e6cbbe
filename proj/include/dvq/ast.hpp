#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dvq {

/// Chart targets a query can visualize. Exactly these four exist.
enum class ChartType { Bar, Pie, Line, Scatter };

enum class AggFunc { Count, Sum, Avg, Min, Max };

/// Calendar buckets for the BIN ... BY clause.
enum class BinUnit { Year, Month, Day, Weekday };

/// Axis value kinds, also used for schema column types.
enum class ValueKind { Nominal, Quantitative, Temporal };

enum class CompareOp { Eq, Ne, Lt, Gt, Le, Ge, Like };

/// Column reference, optionally qualified with a table name.
struct ColumnRef {
  std::optional<std::string> table;
  std::string column;

  bool operator==(const ColumnRef&) const = default;
};

/// Aggregate call. A missing column means COUNT(*).
struct Aggregate {
  AggFunc func = AggFunc::Count;
  std::optional<ColumnRef> column;
  bool distinct = false;  // only valid on COUNT

  bool operator==(const Aggregate&) const = default;
};

/// One projection: either a bare column or an aggregate.
using SelectItem = std::variant<ColumnRef, Aggregate>;

/// Literal in a comparison: quoted text or a decimal number.
using Literal = std::variant<std::string, double>;

struct Condition {
  ColumnRef column;
  CompareOp op = CompareOp::Eq;
  Literal value;

  bool operator==(const Condition&) const = default;
};

struct JoinClause {
  std::string table;
  ColumnRef left;
  ColumnRef right;

  bool operator==(const JoinClause&) const = default;
};

struct OrderItem {
  SelectItem expr;
  bool descending = false;

  bool operator==(const OrderItem&) const = default;
};

struct BinClause {
  ColumnRef column;
  BinUnit unit = BinUnit::Month;

  bool operator==(const BinClause&) const = default;
};

/// The SQL core shared by seed queries and visualization queries:
/// SELECT <x>, <y> FROM ... [JOIN ...] [WHERE ...] [GROUP BY ...]
/// [HAVING ...] [ORDER BY ...] [LIMIT n].
struct SqlCore {
  std::array<SelectItem, 2> select{};
  std::string from;
  std::vector<JoinClause> joins;
  std::vector<Condition> where;
  std::vector<ColumnRef> group_by;
  std::vector<Condition> having;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;

  bool operator==(const SqlCore&) const = default;
};

/// A full visualization query: chart type, SQL core, optional binning.
struct DvqAst {
  ChartType chart = ChartType::Bar;
  SqlCore core;
  std::optional<BinClause> bin;

  bool operator==(const DvqAst&) const = default;
};

inline bool is_aggregate(const SelectItem& item) {
  return std::holds_alternative<Aggregate>(item);
}

inline const char* to_string(ChartType t) {
  switch (t) {
    case ChartType::Bar: return "BAR";
    case ChartType::Pie: return "PIE";
    case ChartType::Line: return "LINE";
    case ChartType::Scatter: return "SCATTER";
  }
  return "";
}

inline const char* to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Count: return "COUNT";
    case AggFunc::Sum: return "SUM";
    case AggFunc::Avg: return "AVG";
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
  }
  return "";
}

inline const char* to_string(BinUnit u) {
  switch (u) {
    case BinUnit::Year: return "YEAR";
    case BinUnit::Month: return "MONTH";
    case BinUnit::Day: return "DAY";
    case BinUnit::Weekday: return "WEEKDAY";
  }
  return "";
}

inline const char* to_string(ValueKind k) {
  switch (k) {
    case ValueKind::Nominal: return "nominal";
    case ValueKind::Quantitative: return "quantitative";
    case ValueKind::Temporal: return "temporal";
  }
  return "";
}

inline const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Like: return "LIKE";
  }
  return "";
}

}  // namespace dvq
