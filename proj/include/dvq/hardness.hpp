#pragma once

#include <array>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"
#include "dvq/schema.hpp"

namespace dvq {

enum class Hardness { Easy, Medium, Hard, ExtraHard };

inline const char* to_string(Hardness h) {
  switch (h) {
    case Hardness::Easy: return "EASY";
    case Hardness::Medium: return "MEDIUM";
    case Hardness::Hard: return "HARD";
    case Hardness::ExtraHard: return "EXTRA_HARD";
  }
  return "EASY";
}

inline Hardness level_of(int s_total) {
  if (s_total <= 2) return Hardness::Easy;
  if (s_total <= 4) return Hardness::Medium;
  if (s_total <= 6) return Hardness::Hard;
  return Hardness::ExtraHard;
}

/// Additive structural complexity of one query.
struct HardnessScore {
  int s_select = 0;
  int s_table = 0;
  int s_group = 0;
  int s_order = 0;
  int s_conditions = 0;
  int s_bin = 0;
  int s_total = 0;
  Hardness level = Hardness::Easy;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["s_select"] = s_select;
    out["s_table"] = s_table;
    out["s_group"] = s_group;
    out["s_order"] = s_order;
    out["s_conditions"] = s_conditions;
    out["s_bin"] = s_bin;
    out["s_total"] = s_total;
    out["level"] = to_string(level);
    return out;
  }
};

/// Scores a query's structure. The select part counts aggregate
/// functions plus distinct bare column references; tables count join
/// operations; conditions count WHERE and HAVING predicates plus one
/// for LIMIT. Purely syntactic: execution results never matter here.
inline HardnessScore score(const DvqAst& ast) {
  HardnessScore s;
  std::set<std::string> bare;
  for (const auto& item : ast.core.select) {
    if (is_aggregate(item)) {
      ++s.s_select;
    } else {
      const auto& col = std::get<ColumnRef>(item);
      std::string key = col.table ? to_lower(*col.table) + "." + to_lower(col.column)
                                  : to_lower(col.column);
      if (bare.insert(std::move(key)).second) ++s.s_select;
    }
  }
  s.s_table = static_cast<int>(ast.core.joins.size());
  s.s_group = static_cast<int>(ast.core.group_by.size());
  s.s_order = static_cast<int>(ast.core.order_by.size());
  s.s_conditions = static_cast<int>(ast.core.where.size() + ast.core.having.size()) +
                   (ast.core.limit ? 1 : 0);
  s.s_bin = ast.bin ? 1 : 0;
  s.s_total = s.s_select + s.s_table + s.s_group + s.s_order + s.s_conditions + s.s_bin;
  s.level = level_of(s.s_total);
  return s;
}

inline constexpr std::array<ChartType, 4> kAllChartTypes = {
    ChartType::Bar, ChartType::Pie, ChartType::Line, ChartType::Scatter};
inline constexpr std::array<Hardness, 4> kAllHardness = {
    Hardness::Easy, Hardness::Medium, Hardness::Hard, Hardness::ExtraHard};

/// Chart-type-by-difficulty counts over a corpus.
struct HardnessHistogram {
  std::array<std::array<size_t, 4>, 4> counts{};  // [chart][level]
  size_t total = 0;

  size_t& at(ChartType c, Hardness h) {
    return counts[static_cast<size_t>(c)][static_cast<size_t>(h)];
  }
  size_t at(ChartType c, Hardness h) const {
    return counts[static_cast<size_t>(c)][static_cast<size_t>(h)];
  }

  size_t level_total(Hardness h) const {
    size_t n = 0;
    for (ChartType c : kAllChartTypes) n += at(c, h);
    return n;
  }

  size_t chart_total(ChartType c) const {
    size_t n = 0;
    for (Hardness h : kAllHardness) n += at(c, h);
    return n;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    for (ChartType c : kAllChartTypes) {
      nlohmann::ordered_json row;
      for (Hardness h : kAllHardness) row[to_string(h)] = at(c, h);
      out[to_string(c)] = std::move(row);
    }
    out["total"] = total;
    return out;
  }

  /// Fixed-width text table, chart types down, difficulty across.
  std::string to_text() const {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-8s %10s %10s %10s %10s %10s\n", "type", "EASY",
                  "MEDIUM", "HARD", "EXTRA_HARD", "total");
    out += line;
    for (ChartType c : kAllChartTypes) {
      std::snprintf(line, sizeof(line), "%-8s %10zu %10zu %10zu %10zu %10zu\n", to_string(c),
                    at(c, Hardness::Easy), at(c, Hardness::Medium), at(c, Hardness::Hard),
                    at(c, Hardness::ExtraHard), chart_total(c));
      out += line;
    }
    std::snprintf(line, sizeof(line), "%-8s %10zu %10zu %10zu %10zu %10zu\n", "total",
                  level_total(Hardness::Easy), level_total(Hardness::Medium),
                  level_total(Hardness::Hard), level_total(Hardness::ExtraHard), total);
    out += line;
    return out;
  }
};

inline HardnessHistogram bucket_corpus(const std::vector<DvqAst>& asts) {
  HardnessHistogram hist;
  for (const auto& ast : asts) {
    ++hist.at(ast.chart, score(ast).level);
    ++hist.total;
  }
  return hist;
}

}  // namespace dvq
