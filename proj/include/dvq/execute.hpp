#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dvq/ast.hpp"
#include "dvq/cell.hpp"
#include "dvq/print.hpp"
#include "dvq/table.hpp"
#include "dvq/validate.hpp"

namespace dvq {

/// Raised for semantic failures during execution (kind-incompatible
/// comparisons, references that do not resolve against the database).
struct ExecError : std::runtime_error {
  explicit ExecError(const std::string& what) : std::runtime_error(what) {}
};

/// The (x, y) pairs a chart displays, in final display order.
struct ResultSet {
  std::vector<std::pair<Cell, Cell>> rows;
  ValueKind x_kind = ValueKind::Nominal;
  ValueKind y_kind = ValueKind::Nominal;

  size_t n_values() const { return rows.size(); }
};

/// SQL LIKE with % and _ wildcards, case-sensitive, no escape syntax.
inline bool like_match(std::string_view text, std::string_view pattern) {
  size_t t = 0, p = 0;
  size_t star_p = std::string_view::npos, star_t = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star_p = p++;
      star_t = t;
    } else if (star_p != std::string_view::npos) {
      p = star_p + 1;
      t = ++star_t;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

namespace detail {

struct CellLess {
  bool operator()(const Cell& a, const Cell& b) const { return compare_cells(a, b) < 0; }
};

struct CellVecLess {
  bool operator()(const std::vector<Cell>& a, const std::vector<Cell>& b) const {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      auto c = compare_cells(a[i], b[i]);
      if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
    }
    return a.size() < b.size();
  }
};

/// How a value is represented for comparison purposes: numbers compare
/// numerically, everything else as text.
enum class RepKind { Number, Text };

inline RepKind rep_of(ValueKind kind) {
  return kind == ValueKind::Quantitative ? RepKind::Number : RepKind::Text;
}

inline RepKind rep_of(BinUnit unit) {
  return unit == BinUnit::Year ? RepKind::Number : RepKind::Text;
}

class Executor {
 public:
  Executor(const DvqAst& ast, const Database& db)
      : ast_(ast), db_(db), scope_(ast.core, db.schema) {}

  ResultSet run() {
    bind_tables();
    if (ast_.bin) bin_binding_ = need(ast_.bin->column, "BIN");
    build_rows();
    apply_where();
    ResultSet rs;
    rs.x_kind = item_kind(ast_.core.select[0]);
    rs.y_kind = item_kind(ast_.core.select[1]);
    if (is_grouped()) {
      emit_grouped(rs);
    } else {
      emit_projection(rs);
    }
    if (ast_.core.limit && rs.rows.size() > static_cast<size_t>(*ast_.core.limit)) {
      rs.rows.resize(static_cast<size_t>(*ast_.core.limit));
    }
    return rs;
  }

 private:
  using RowIdx = std::vector<size_t>;  // one row index per scope table

  void bind_tables() {
    for (size_t i = 0; i < scope_.size(); ++i) {
      const Table* table = db_.find_table(scope_.table_name(i));
      if (!table) throw ExecError("table '" + scope_.table_name(i) + "' is not loaded");
      tables_.push_back(table);
    }
  }

  ColumnBinding need(const ColumnRef& ref, const char* where) {
    auto bound = scope_.resolve(ref);
    if (!bound) {
      throw ExecError(std::string(where) + ": column " + column_text(ref) +
                      " does not resolve");
    }
    return *bound;
  }

  const Cell& cell_at(const RowIdx& row, const ColumnBinding& b) const {
    return tables_[b.table]->rows[row[b.table]][b.column];
  }

  bool binned(const ColumnBinding& b) const { return bin_binding_ && *bin_binding_ == b; }

  Cell value_at(const RowIdx& row, const ColumnBinding& b) const {
    const Cell& raw = cell_at(row, b);
    if (binned(b)) return bin_cell(raw, ast_.bin->unit);
    return raw;
  }

  void build_rows() {
    rows_.reserve(tables_[0]->rows.size());
    for (size_t i = 0; i < tables_[0]->rows.size(); ++i) rows_.push_back({i});
    for (size_t j = 0; j < ast_.core.joins.size(); ++j) {
      const JoinClause& join = ast_.core.joins[j];
      ColumnBinding lb = need(join.left, "JOIN");
      ColumnBinding rb = need(join.right, "JOIN");
      if (lb.table > j + 1 || rb.table > j + 1) {
        throw ExecError("JOIN condition references a table joined later");
      }
      std::vector<RowIdx> joined;
      const Table& added = *tables_[j + 1];
      for (const RowIdx& row : rows_) {
        RowIdx extended = row;
        extended.push_back(0);
        for (size_t r = 0; r < added.rows.size(); ++r) {
          extended.back() = r;
          const Cell& l = cell_at(extended, lb);
          const Cell& rc = cell_at(extended, rb);
          if (is_null(l) || is_null(rc)) continue;  // NULL joins nothing
          if (compare_cells(l, rc) == std::strong_ordering::equal) joined.push_back(extended);
        }
      }
      rows_ = std::move(joined);
    }
  }

  static void check_condition_rep(RepKind rep, const Condition& cond) {
    bool numeric_literal = std::holds_alternative<double>(cond.value);
    if (cond.op == CompareOp::Like) {
      if (numeric_literal) throw ExecError("LIKE needs a text pattern: " + condition_text(cond));
      if (rep == RepKind::Number) {
        throw ExecError("LIKE cannot match a numeric column: " + condition_text(cond));
      }
      return;
    }
    if ((rep == RepKind::Number) != numeric_literal) {
      throw ExecError("comparison mixes a " +
                      std::string(rep == RepKind::Number ? "numeric" : "text") +
                      " column with a " + (numeric_literal ? "numeric" : "text") +
                      " literal: " + condition_text(cond));
    }
  }

  /// NULL never matches any comparison.
  static bool cell_matches(const Cell& cell, const Condition& cond) {
    if (is_null(cell)) return false;
    if (cond.op == CompareOp::Like) {
      return like_match(cell_text(cell), std::get<std::string>(cond.value));
    }
    std::strong_ordering c = std::strong_ordering::equal;
    if (const auto* num = std::get_if<double>(&cond.value)) {
      const auto* lhs = std::get_if<double>(&cell);
      if (!lhs) throw ExecError("non-numeric value in numeric comparison: " + condition_text(cond));
      if (*lhs < *num) c = std::strong_ordering::less;
      else if (*lhs > *num) c = std::strong_ordering::greater;
    } else {
      c = cell_text(cell).compare(std::get<std::string>(cond.value)) <=> 0;
    }
    switch (cond.op) {
      case CompareOp::Eq: return c == std::strong_ordering::equal;
      case CompareOp::Ne: return c != std::strong_ordering::equal;
      case CompareOp::Lt: return c == std::strong_ordering::less;
      case CompareOp::Gt: return c == std::strong_ordering::greater;
      case CompareOp::Le: return c != std::strong_ordering::greater;
      case CompareOp::Ge: return c != std::strong_ordering::less;
      case CompareOp::Like: return false;  // handled above
    }
    return false;
  }

  /// WHERE tests raw values; binning only rewrites grouped output.
  void apply_where() {
    for (const Condition& cond : ast_.core.where) {
      ColumnBinding b = need(cond.column, "WHERE");
      check_condition_rep(rep_of(b.kind), cond);
      std::vector<RowIdx> kept;
      kept.reserve(rows_.size());
      for (RowIdx& row : rows_) {
        if (cell_matches(cell_at(row, b), cond)) kept.push_back(std::move(row));
      }
      rows_ = std::move(kept);
    }
  }

  bool is_grouped() const {
    return !ast_.core.group_by.empty() || is_aggregate(ast_.core.select[0]) ||
           is_aggregate(ast_.core.select[1]);
  }

  ValueKind item_kind(const SelectItem& item) {
    if (is_aggregate(item)) return ValueKind::Quantitative;
    const auto& col = std::get<ColumnRef>(item);
    ColumnBinding b = need(col, "SELECT");
    if (binned(b)) return bin_kind(ast_.bin->unit);
    return b.kind;
  }

  Cell eval_aggregate(const Aggregate& agg, const std::vector<const RowIdx*>& group) {
    if (!agg.column) return Cell{static_cast<double>(group.size())};  // COUNT(*)
    ColumnBinding b = need(*agg.column, "aggregate");
    if (agg.distinct) {
      std::set<Cell, CellLess> seen;
      for (const RowIdx* row : group) {
        Cell v = value_at(*row, b);
        if (!is_null(v)) seen.insert(std::move(v));
      }
      return Cell{static_cast<double>(seen.size())};
    }
    switch (agg.func) {
      case AggFunc::Count: {
        size_t n = 0;
        for (const RowIdx* row : group) {
          if (!is_null(value_at(*row, b))) ++n;
        }
        return Cell{static_cast<double>(n)};
      }
      case AggFunc::Sum:
      case AggFunc::Avg: {
        double sum = 0.0;
        size_t n = 0;
        for (const RowIdx* row : group) {
          Cell v = value_at(*row, b);
          if (is_null(v)) continue;
          const auto* num = std::get_if<double>(&v);
          if (!num) {
            throw ExecError(std::string(to_string(agg.func)) + "(" +
                            column_text(*agg.column) + ") needs numeric values");
          }
          sum += *num;
          ++n;
        }
        if (n == 0) return Cell{};  // all inputs NULL
        return Cell{agg.func == AggFunc::Avg ? sum / static_cast<double>(n) : sum};
      }
      case AggFunc::Min:
      case AggFunc::Max: {
        Cell best;
        for (const RowIdx* row : group) {
          Cell v = value_at(*row, b);
          if (is_null(v)) continue;
          if (is_null(best)) {
            best = std::move(v);
            continue;
          }
          auto c = compare_cells(v, best);
          if (agg.func == AggFunc::Min ? c == std::strong_ordering::less
                                       : c == std::strong_ordering::greater) {
            best = std::move(v);
          }
        }
        return best;
      }
    }
    return Cell{};
  }

  void emit_grouped(ResultSet& rs) {
    const SqlCore& core = ast_.core;
    std::vector<ColumnBinding> key_bindings;
    key_bindings.reserve(core.group_by.size());
    for (const ColumnRef& key : core.group_by) key_bindings.push_back(need(key, "GROUP BY"));

    std::map<std::vector<Cell>, std::vector<const RowIdx*>, CellVecLess> groups;
    if (core.group_by.empty()) {
      // global aggregate: the group exists only if any row survived
      if (!rows_.empty()) {
        auto& members = groups[{}];
        for (const RowIdx& row : rows_) members.push_back(&row);
      }
    } else {
      for (const RowIdx& row : rows_) {
        std::vector<Cell> key;
        key.reserve(key_bindings.size());
        for (const ColumnBinding& b : key_bindings) key.push_back(value_at(row, b));
        groups[std::move(key)].push_back(&row);
      }
    }

    auto key_index = [&](const ColumnRef& ref, const char* where) -> size_t {
      ColumnBinding b = need(ref, where);
      for (size_t i = 0; i < key_bindings.size(); ++i) {
        if (key_bindings[i] == b) return i;
      }
      throw ExecError(std::string(where) + ": column " + column_text(ref) +
                      " is not a GROUP BY key");
    };

    struct OutRow {
      Cell x, y;
      std::vector<Cell> sort_keys;
    };
    std::vector<OutRow> out;

    auto eval_item = [&](const SelectItem& item, const std::vector<Cell>& key,
                         const std::vector<const RowIdx*>& members) -> Cell {
      if (const auto* agg = std::get_if<Aggregate>(&item)) return eval_aggregate(*agg, members);
      return key[key_index(std::get<ColumnRef>(item), "SELECT")];
    };

    for (auto& [key, members] : groups) {
      bool kept = true;
      for (const Condition& cond : core.having) {
        size_t idx = key_index(cond.column, "HAVING");
        RepKind rep = binned(key_bindings[idx]) ? rep_of(ast_.bin->unit)
                                                : rep_of(key_bindings[idx].kind);
        check_condition_rep(rep, cond);
        if (!cell_matches(key[idx], cond)) {
          kept = false;
          break;
        }
      }
      if (!kept) continue;
      OutRow row;
      row.x = eval_item(core.select[0], key, members);
      row.y = eval_item(core.select[1], key, members);
      for (const OrderItem& item : core.order_by) {
        row.sort_keys.push_back(eval_item(item.expr, key, members));
      }
      out.push_back(std::move(row));
    }

    order_rows(out);
    rs.rows.reserve(out.size());
    for (auto& row : out) rs.rows.emplace_back(std::move(row.x), std::move(row.y));
  }

  void emit_projection(ResultSet& rs) {
    const SqlCore& core = ast_.core;
    ColumnBinding xb = need(std::get<ColumnRef>(core.select[0]), "SELECT");
    ColumnBinding yb = need(std::get<ColumnRef>(core.select[1]), "SELECT");

    struct OutRow {
      Cell x, y;
      std::vector<Cell> sort_keys;
    };
    std::vector<OutRow> out;
    out.reserve(rows_.size());
    for (const RowIdx& row : rows_) {
      OutRow o;
      o.x = value_at(row, xb);
      o.y = value_at(row, yb);
      for (const OrderItem& item : core.order_by) {
        // grammar restricts ungrouped ORDER BY to plain columns
        const auto* col = std::get_if<ColumnRef>(&item.expr);
        if (!col) throw ExecError("ORDER BY aggregate needs GROUP BY");
        o.sort_keys.push_back(value_at(row, need(*col, "ORDER BY")));
      }
      out.push_back(std::move(o));
    }
    order_rows(out);
    rs.rows.reserve(out.size());
    for (auto& row : out) rs.rows.emplace_back(std::move(row.x), std::move(row.y));
  }

  /// Sorts by the ORDER BY keys with their directions, breaking ties by
  /// (x, y) ascending; stable, so equal rows keep their incoming order.
  /// Without ORDER BY the incoming order already stands (group-key
  /// ascending when grouped, raw row order otherwise).
  template <typename Row>
  void order_rows(std::vector<Row>& out) {
    if (ast_.core.order_by.empty()) return;
    const auto& items = ast_.core.order_by;
    std::stable_sort(out.begin(), out.end(), [&](const Row& a, const Row& b) {
      for (size_t i = 0; i < items.size(); ++i) {
        auto c = compare_cells(a.sort_keys[i], b.sort_keys[i]);
        if (c == std::strong_ordering::equal) continue;
        bool less = c == std::strong_ordering::less;
        return items[i].descending ? !less : less;
      }
      auto cx = compare_cells(a.x, b.x);
      if (cx != std::strong_ordering::equal) return cx == std::strong_ordering::less;
      return compare_cells(a.y, b.y) == std::strong_ordering::less;
    });
  }

  const DvqAst& ast_;
  const Database& db_;
  NameScope scope_;
  std::vector<const Table*> tables_;
  std::vector<RowIdx> rows_;
  std::optional<ColumnBinding> bin_binding_;
};

}  // namespace detail

/// Runs the SQL core of a visualization query over in-memory tables.
/// Join semantics are inner equality joins; WHERE sees raw values while
/// BIN rewrites the binned column wherever it feeds output (SELECT,
/// GROUP BY, HAVING, ORDER BY, aggregate arguments). Precondition:
/// validate(ast, db.schema) is clean; violations raise ExecError.
inline ResultSet execute(const DvqAst& ast, const Database& db) {
  return detail::Executor(ast, db).run();
}

}  // namespace dvq
