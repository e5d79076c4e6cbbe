#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"
#include "dvq/execute.hpp"

namespace dvq {

inline constexpr const char* kRuleAllNRange = "ALL_N_RANGE";
inline constexpr const char* kRuleAllNominalY = "ALL_NOMINAL_Y";
inline constexpr const char* kRuleLineScatterN2 = "LINESCATTER_N2";
inline constexpr const char* kRuleLineScatterNominalX = "LINESCATTER_NOMINAL_X";
inline constexpr const char* kRulePieNGt10 = "PIE_N_GT_10";
inline constexpr const char* kRuleBarNGt26 = "BAR_N_GT_26";

/// Outcome of the chart-quality rules for one executed query.
struct FilterVerdict {
  bool accepted = true;
  std::vector<std::string> violated_rules;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["accepted"] = accepted;
    out["violated_rules"] = violated_rules;
    return out;
  }
};

/// Applies every quality rule to one candidate and reports all
/// violations. N is the number of (x, y) values the query retrieved.
/// Axis kinds are the executed result's derived kinds, except that a
/// y column whose values are all NULL counts as nominal.
inline FilterVerdict check(const DvqAst& ast, const ResultSet& rs) {
  const size_t n = rs.n_values();
  const bool line_or_scatter = ast.chart == ChartType::Line || ast.chart == ChartType::Scatter;

  bool y_nominal = rs.y_kind == ValueKind::Nominal;
  if (!y_nominal && n > 0) {
    bool all_null = true;
    for (const auto& [x, y] : rs.rows) {
      if (!is_null(y)) {
        all_null = false;
        break;
      }
    }
    y_nominal = all_null;
  }

  FilterVerdict verdict;
  if (n > 10000 || n <= 1) verdict.violated_rules.push_back(kRuleAllNRange);
  if (y_nominal) verdict.violated_rules.push_back(kRuleAllNominalY);
  if (line_or_scatter && n == 2) verdict.violated_rules.push_back(kRuleLineScatterN2);
  if (line_or_scatter && rs.x_kind == ValueKind::Nominal) {
    verdict.violated_rules.push_back(kRuleLineScatterNominalX);
  }
  if (ast.chart == ChartType::Pie && n > 10) verdict.violated_rules.push_back(kRulePieNGt10);
  if (ast.chart == ChartType::Bar && n > 26) verdict.violated_rules.push_back(kRuleBarNGt26);
  verdict.accepted = verdict.violated_rules.empty();
  return verdict;
}

/// Order-preserving partition of candidates into kept and rejected.
struct FilterPartition {
  struct Rejected {
    DvqAst ast;
    ResultSet rs;
    FilterVerdict verdict;
  };

  std::vector<std::pair<DvqAst, ResultSet>> accepted;
  std::vector<Rejected> rejected;
};

inline FilterPartition filter_corpus(std::vector<std::pair<DvqAst, ResultSet>> candidates) {
  FilterPartition out;
  for (auto& [ast, rs] : candidates) {
    FilterVerdict verdict = check(ast, rs);
    if (verdict.accepted) {
      out.accepted.emplace_back(std::move(ast), std::move(rs));
    } else {
      out.rejected.push_back({std::move(ast), std::move(rs), std::move(verdict)});
    }
  }
  return out;
}

}  // namespace dvq
