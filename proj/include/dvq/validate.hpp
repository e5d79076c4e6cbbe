#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dvq/ast.hpp"
#include "dvq/schema.hpp"

namespace dvq {

/// One validation finding. `code` is a stable machine-readable tag,
/// `subject` the offending name, `message` the human-readable line.
struct Diagnostic {
  std::string code;
  std::string subject;
  std::string message;

  std::string to_string() const { return code + ": " + message; }
};

inline constexpr const char* kDiagUnresolvedTable = "unresolved-table";
inline constexpr const char* kDiagUnresolvedColumn = "unresolved-column";
inline constexpr const char* kDiagAmbiguousColumn = "ambiguous-column";
inline constexpr const char* kDiagBinType = "bin-type";
inline constexpr const char* kDiagAggregateType = "aggregate-type";
inline constexpr const char* kDiagGrouping = "grouping";

/// A column ref resolved against the tables a query brings into scope.
/// `table` indexes the scope (0 = FROM, 1.. = joins in order), `column`
/// indexes that table's schema columns.
struct ColumnBinding {
  size_t table = 0;
  size_t column = 0;
  ValueKind kind = ValueKind::Nominal;

  bool operator==(const ColumnBinding&) const = default;
};

/// Name scope of one query: the FROM table plus joined tables, in
/// clause order. Lookups are case-insensitive.
class NameScope {
 public:
  enum class Failure { None, UnknownTable, UnknownColumn, Ambiguous };

  NameScope(const SqlCore& core, const Schema& schema) {
    add_table(core.from, schema);
    for (const auto& join : core.joins) add_table(join.table, schema);
  }

  const std::vector<std::string>& missing_tables() const { return missing_; }
  size_t size() const { return tables_.size(); }
  const TableDef& table(size_t i) const { return *tables_[i].def; }
  const std::string& table_name(size_t i) const { return tables_[i].name; }

  std::optional<ColumnBinding> resolve(const ColumnRef& ref, Failure* why = nullptr) const {
    if (why) *why = Failure::None;
    if (ref.table) {
      for (size_t t = 0; t < tables_.size(); ++t) {
        if (!iequals(tables_[t].name, *ref.table)) continue;
        if (!tables_[t].def) {
          if (why) *why = Failure::UnknownTable;
          return std::nullopt;
        }
        if (const auto* col = tables_[t].def->find_column(ref.column)) {
          return binding(t, *tables_[t].def, *col);
        }
        if (why) *why = Failure::UnknownColumn;
        return std::nullopt;
      }
      if (why) *why = Failure::UnknownTable;
      return std::nullopt;
    }
    std::optional<ColumnBinding> found;
    for (size_t t = 0; t < tables_.size(); ++t) {
      if (!tables_[t].def) continue;
      if (const auto* col = tables_[t].def->find_column(ref.column)) {
        if (found) {
          if (why) *why = Failure::Ambiguous;
          return std::nullopt;
        }
        found = binding(t, *tables_[t].def, *col);
      }
    }
    if (!found && why) *why = Failure::UnknownColumn;
    return found;
  }

 private:
  struct Entry {
    std::string name;
    const TableDef* def = nullptr;  // null when the schema lacks the table
  };

  void add_table(const std::string& name, const Schema& schema) {
    Entry entry;
    entry.name = name;
    entry.def = schema.find_table(name);
    if (!entry.def) missing_.push_back(name);
    tables_.push_back(std::move(entry));
  }

  static ColumnBinding binding(size_t t, const TableDef& table, const ColumnDef& col) {
    ColumnBinding b;
    b.table = t;
    b.column = static_cast<size_t>(&col - table.columns.data());
    b.kind = col.kind;
    return b;
  }

  std::vector<Entry> tables_;
  std::vector<std::string> missing_;
};

namespace detail {

class Validator {
 public:
  Validator(const DvqAst& ast, const Schema& schema)
      : ast_(ast), scope_(ast.core, schema) {}

  std::vector<Diagnostic> run() {
    for (const auto& name : scope_.missing_tables()) {
      report(kDiagUnresolvedTable, name, "table '" + name + "' is not in the schema");
    }
    const SqlCore& core = ast_.core;
    for (const auto& item : core.select) check_select_item(item);
    for (const auto& join : core.joins) {
      check_ref(join.left);
      check_ref(join.right);
    }
    for (const auto& cond : core.where) check_ref(cond.column);
    for (const auto& key : core.group_by) check_ref(key);
    for (const auto& cond : core.having) check_ref(cond.column);
    for (const auto& item : core.order_by) check_select_item(item.expr);
    if (ast_.bin) {
      if (auto bound = check_ref(ast_.bin->column)) {
        if (bound->kind != ValueKind::Temporal) {
          report(kDiagBinType, ast_.bin->column.column,
                 "BIN requires a temporal column; '" + ast_.bin->column.column + "' is " +
                     std::string(to_string(bound->kind)));
        }
      }
    }
    check_grouping();
    return std::move(diags_);
  }

 private:
  std::optional<ColumnBinding> check_ref(const ColumnRef& ref) {
    NameScope::Failure why;
    auto bound = scope_.resolve(ref, &why);
    if (bound) return bound;
    std::string shown = ref.table ? *ref.table + "." + ref.column : ref.column;
    switch (why) {
      case NameScope::Failure::UnknownColumn:
        report(kDiagUnresolvedColumn, shown, "column '" + shown + "' does not resolve");
        break;
      case NameScope::Failure::Ambiguous:
        report(kDiagAmbiguousColumn, shown,
               "column '" + shown + "' matches more than one table in scope");
        break;
      case NameScope::Failure::UnknownTable:
        // the missing table is already reported once
        break;
      case NameScope::Failure::None:
        break;
    }
    return std::nullopt;
  }

  void check_select_item(const SelectItem& item) {
    if (const auto* col = std::get_if<ColumnRef>(&item)) {
      check_ref(*col);
      return;
    }
    const auto& agg = std::get<Aggregate>(item);
    if (!agg.column) return;  // COUNT(*)
    auto bound = check_ref(*agg.column);
    if (!bound) return;
    if ((agg.func == AggFunc::Sum || agg.func == AggFunc::Avg) &&
        bound->kind != ValueKind::Quantitative) {
      report(kDiagAggregateType, agg.column->column,
             std::string(to_string(agg.func)) + " requires a quantitative column; '" +
                 agg.column->column + "' is " + std::string(to_string(bound->kind)));
    }
  }

  bool in_group_by(const ColumnRef& ref) const {
    auto bound = scope_.resolve(ref);
    if (!bound) return false;
    for (const auto& key : ast_.core.group_by) {
      if (scope_.resolve(key) == bound) return true;
    }
    return false;
  }

  bool is_select_item(const SelectItem& expr) const {
    for (const auto& item : ast_.core.select) {
      if (items_equal(item, expr)) return true;
    }
    return false;
  }

  bool items_equal(const SelectItem& a, const SelectItem& b) const {
    const auto* ca = std::get_if<ColumnRef>(&a);
    const auto* cb = std::get_if<ColumnRef>(&b);
    if (ca && cb) return scope_.resolve(*ca) && scope_.resolve(*ca) == scope_.resolve(*cb);
    if (ca || cb) return false;
    const auto& aa = std::get<Aggregate>(a);
    const auto& ab = std::get<Aggregate>(b);
    if (aa.func != ab.func || aa.distinct != ab.distinct) return false;
    if (!aa.column && !ab.column) return true;
    if (!aa.column || !ab.column) return false;
    auto ra = scope_.resolve(*aa.column);
    return ra && ra == scope_.resolve(*ab.column);
  }

  void check_grouping() {
    const SqlCore& core = ast_.core;
    bool any_agg = is_aggregate(core.select[0]) || is_aggregate(core.select[1]);
    bool grouped = !core.group_by.empty();
    if (grouped || any_agg) {
      for (const auto& item : core.select) {
        const auto* col = std::get_if<ColumnRef>(&item);
        if (!col || !scope_.resolve(*col)) continue;
        if (!in_group_by(*col)) {
          report(kDiagGrouping, col->column,
                 "column '" + col->column +
                     "' must appear in GROUP BY when the query aggregates");
        }
      }
      for (const auto& cond : core.having) {
        if (!scope_.resolve(cond.column)) continue;
        if (!in_group_by(cond.column)) {
          report(kDiagGrouping, cond.column.column,
                 "HAVING may only test GROUP BY columns; '" + cond.column.column +
                     "' is not one");
        }
      }
      for (const auto& item : core.order_by) {
        if (const auto* col = std::get_if<ColumnRef>(&item.expr)) {
          if (!scope_.resolve(*col)) continue;
          if (!in_group_by(*col) && !is_select_item(item.expr)) {
            report(kDiagGrouping, col->column,
                   "ORDER BY column '" + col->column +
                       "' must be a GROUP BY key or a selected column");
          }
        } else if (!is_select_item(item.expr)) {
          report(kDiagGrouping, select_subject(item.expr),
                 "ORDER BY aggregate must match a selected aggregate");
        }
      }
    } else {
      if (!core.having.empty()) {
        report(kDiagGrouping, "", "HAVING requires GROUP BY or an aggregated select list");
      }
      for (const auto& item : core.order_by) {
        if (is_aggregate(item.expr)) {
          report(kDiagGrouping, select_subject(item.expr),
                 "ORDER BY aggregate requires an aggregated query");
        }
      }
    }
  }

  static std::string select_subject(const SelectItem& item) {
    if (const auto* col = std::get_if<ColumnRef>(&item)) return col->column;
    const auto& agg = std::get<Aggregate>(item);
    return agg.column ? agg.column->column : "*";
  }

  void report(std::string code, std::string subject, std::string message) {
    auto key = std::make_pair(code, to_lower(subject));
    if (!seen_.insert(key).second) return;  // one finding per (code, name)
    diags_.push_back({std::move(code), std::move(subject), std::move(message)});
  }

  const DvqAst& ast_;
  NameScope scope_;
  std::vector<Diagnostic> diags_;
  std::set<std::pair<std::string, std::string>> seen_;
};

}  // namespace detail

/// Checks an AST against a schema: every name resolves, BIN targets a
/// temporal column, SUM/AVG apply to quantitative columns, and the
/// grouped/ungrouped shape is consistent. An empty result means valid.
inline std::vector<Diagnostic> validate(const DvqAst& ast, const Schema& schema) {
  return detail::Validator(ast, schema).run();
}

}  // namespace dvq
