#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dvq/ast.hpp"
#include "dvq/llm.hpp"
#include "dvq/parse.hpp"
#include "dvq/print.hpp"
#include "dvq/schema.hpp"
#include "dvq/validate.hpp"

namespace dvq {

namespace detail {

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Finds the payload after the last `marker` at a line start, up to the
/// next section marker or the end of the prompt.
inline std::string extract_section(std::string_view prompt, std::string_view marker) {
  static constexpr std::string_view kMarkers[] = {"Schema:", "SQL:", "DVQ:"};
  size_t start = std::string_view::npos;
  for (size_t pos = 0; pos < prompt.size();) {
    size_t hit = prompt.find(marker, pos);
    if (hit == std::string_view::npos) break;
    if (hit == 0 || prompt[hit - 1] == '\n') start = hit + marker.size();
    pos = hit + marker.size();
  }
  if (start == std::string_view::npos) return {};
  size_t end = prompt.size();
  for (std::string_view other : kMarkers) {
    for (size_t pos = start; pos < end;) {
      size_t hit = prompt.find(other, pos);
      if (hit == std::string_view::npos || hit >= end) break;
      if (hit == 0 || prompt[hit - 1] == '\n') {
        end = hit;
        break;
      }
      pos = hit + other.size();
    }
  }
  return strip(prompt.substr(start, end - start));
}

/// Reads the "TABLE(col:kind, ...)" lines that Schema::describe emits.
inline Schema schema_from_description(std::string_view text) {
  Schema schema;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = strip(text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                            : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (line.empty()) continue;
    size_t open = line.find('(');
    size_t close = line.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) continue;
    TableDef table;
    table.name = strip(std::string_view(line).substr(0, open));
    std::string_view cols(line.data() + open + 1, close - open - 1);
    while (!cols.empty()) {
      size_t comma = cols.find(',');
      std::string item = strip(cols.substr(0, comma));
      cols = comma == std::string_view::npos ? std::string_view{} : cols.substr(comma + 1);
      size_t colon = item.find(':');
      if (colon == std::string::npos) continue;
      ColumnDef col;
      col.name = strip(std::string_view(item).substr(0, colon));
      std::string kind = strip(std::string_view(item).substr(colon + 1));
      if (iequals(kind, "quantitative")) col.kind = ValueKind::Quantitative;
      else if (iequals(kind, "temporal")) col.kind = ValueKind::Temporal;
      else col.kind = ValueKind::Nominal;
      table.columns.push_back(std::move(col));
    }
    if (!table.name.empty()) schema.tables.push_back(std::move(table));
  }
  return schema;
}

}  // namespace detail

/// Stand-in for a real language model: a fixed rule system that turns
/// the SQL or DVQ payload of a prompt into a plausible answer. Pure and
/// deterministic, so pipeline runs are byte-reproducible; variety comes
/// from hashing the query text.
class MockRuleBackend : public LlmBackend {
 public:
  std::vector<std::string> complete(const std::string& prompt,
                                    const DecodingParams& params) override {
    std::string answer;
    std::string dvq = detail::extract_section(prompt, "DVQ:");
    if (!dvq.empty()) {
      answer = nlq_answer(dvq);
    } else {
      std::string sql = detail::extract_section(prompt, "SQL:");
      if (!sql.empty()) {
        answer = dvq_answer(sql, detail::extract_section(prompt, "Schema:"));
      } else {
        answer = "I do not understand the request.";
      }
    }
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(params.n > 0 ? params.n : 1));
    for (int i = 0; i < (params.n > 0 ? params.n : 1); ++i) out.push_back(answer);
    return out;
  }

 private:
  static std::string dvq_answer(const std::string& sql, const std::string& schema_text) {
    SqlParseResult parsed = parse_sql_core(sql);
    if (!parsed.ok()) return "Sorry, I cannot express that query as a visualization.";
    DvqAst ast;
    ast.core = std::move(*parsed.core);
    Schema schema = detail::schema_from_description(schema_text);
    NameScope scope(ast.core, schema);
    auto kind_of = [&](const SelectItem& item) {
      if (is_aggregate(item)) return ValueKind::Quantitative;
      auto bound = scope.resolve(std::get<ColumnRef>(item));
      return bound ? bound->kind : ValueKind::Nominal;
    };
    ValueKind xk = kind_of(ast.core.select[0]);
    ValueKind yk = kind_of(ast.core.select[1]);
    if (yk == ValueKind::Nominal && xk != ValueKind::Nominal) {
      std::swap(ast.core.select[0], ast.core.select[1]);
      std::swap(xk, yk);
    }
    uint64_t h = detail::fnv1a(print_sql_core(ast.core));
    switch (xk) {
      case ValueKind::Temporal:
        ast.chart = h % 2 ? ChartType::Line : ChartType::Scatter;
        break;
      case ValueKind::Nominal:
        ast.chart = h % 3 == 2 ? ChartType::Pie : ChartType::Bar;
        break;
      case ValueKind::Quantitative:
        ast.chart = h % 2 ? ChartType::Scatter : ChartType::Bar;
        break;
    }
    if (xk == ValueKind::Temporal) {
      if (const auto* col = std::get_if<ColumnRef>(&ast.core.select[0])) {
        static constexpr BinUnit kUnits[4] = {BinUnit::Month, BinUnit::Year, BinUnit::Day,
                                              BinUnit::Weekday};
        uint64_t pick = (h >> 8) % 5;
        if (pick > 0) ast.bin = BinClause{*col, kUnits[pick - 1]};
      }
    }
    return print_canonical(ast);
  }

  static std::string item_phrase(const SelectItem& item) {
    if (const auto* col = std::get_if<ColumnRef>(&item)) return col->column;
    const auto& agg = std::get<Aggregate>(item);
    if (!agg.column) return "the number of records";
    const std::string& col = agg.column->column;
    if (agg.distinct) return "the number of distinct " + col + " values";
    switch (agg.func) {
      case AggFunc::Count: return "the count of " + col;
      case AggFunc::Sum: return "the total " + col;
      case AggFunc::Avg: return "the average " + col;
      case AggFunc::Min: return "the smallest " + col;
      case AggFunc::Max: return "the largest " + col;
    }
    return col;
  }

  static std::string chart_phrase(ChartType chart) {
    switch (chart) {
      case ChartType::Bar: return "bar chart";
      case ChartType::Pie: return "pie chart";
      case ChartType::Line: return "line chart";
      case ChartType::Scatter: return "scatter plot";
    }
    return "chart";
  }

  static std::string op_phrase(CompareOp op) {
    switch (op) {
      case CompareOp::Eq: return "is";
      case CompareOp::Ne: return "is not";
      case CompareOp::Lt: return "is below";
      case CompareOp::Gt: return "is above";
      case CompareOp::Le: return "is at most";
      case CompareOp::Ge: return "is at least";
      case CompareOp::Like: return "matches";
    }
    return "is";
  }

  static std::string literal_phrase(const Literal& lit) {
    if (const auto* num = std::get_if<double>(&lit)) return number_text(*num);
    return std::get<std::string>(lit);
  }

  static std::string clause_phrases(const DvqAst& ast) {
    std::string out;
    if (!ast.core.where.empty()) {
      out += " where ";
      for (size_t i = 0; i < ast.core.where.size(); ++i) {
        const Condition& c = ast.core.where[i];
        if (i) out += " and ";
        out += c.column.column + " " + op_phrase(c.op) + " " + literal_phrase(c.value);
      }
    }
    if (!ast.core.having.empty()) {
      out += " keeping only groups whose ";
      for (size_t i = 0; i < ast.core.having.size(); ++i) {
        const Condition& c = ast.core.having[i];
        if (i) out += " and ";
        out += c.column.column + " " + op_phrase(c.op) + " " + literal_phrase(c.value);
      }
    }
    if (!ast.core.order_by.empty()) {
      out += " sorted by " + item_phrase(ast.core.order_by[0].expr) +
             (ast.core.order_by[0].descending ? " in descending order" : "");
    }
    if (ast.core.limit) {
      out += " showing only " + std::to_string(*ast.core.limit) + " entries";
    }
    return out;
  }

  static std::string x_phrase(const DvqAst& ast) {
    std::string out = item_phrase(ast.core.select[0]);
    if (ast.bin) {
      const char* unit = "";
      switch (ast.bin->unit) {
        case BinUnit::Year: unit = "year"; break;
        case BinUnit::Month: unit = "month"; break;
        case BinUnit::Day: unit = "day"; break;
        case BinUnit::Weekday: unit = "weekday"; break;
      }
      out += std::string(" binned by ") + unit;
    }
    return out;
  }

  static std::string nlq_answer(const std::string& dvq) {
    ParseResult parsed = parse_dvq(dvq);
    if (!parsed.ok()) return "Sorry, I cannot read that visualization query.";
    const DvqAst& ast = *parsed.ast;
    std::string x = x_phrase(ast);
    std::string y = item_phrase(ast.core.select[1]);
    std::string clauses = clause_phrases(ast);
    std::string imperative = "Draw a " + chart_phrase(ast.chart) + " of " + y + " for each " +
                             x + clauses + ".";
    std::string interrogative = "What is " + y + " for each " + x + clauses + "?";
    return "Imperative: " + imperative + "\nInterrogative: " + interrogative;
  }
};

}  // namespace dvq
