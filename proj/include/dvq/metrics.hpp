#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"
#include "dvq/hardness.hpp"
#include "dvq/parse.hpp"
#include "dvq/print.hpp"

namespace dvq {

/// Component-wise strict comparison of one predicted query against its
/// gold reference.
struct MatchReport {
  bool vis_match = false;
  bool data_match = false;
  bool axis_match = false;
  bool overall_match = false;
};

namespace detail {

inline bool data_clauses_equal(const DvqAst& a, const DvqAst& b) {
  return a.core.from == b.core.from && a.core.joins == b.core.joins &&
         a.core.where == b.core.where && a.core.group_by == b.core.group_by &&
         a.core.having == b.core.having && a.core.order_by == b.core.order_by &&
         a.core.limit == b.core.limit && a.bin == b.bin;
}

}  // namespace detail

/// Strict exact matching. The gold side must be a valid query; the
/// predicted side may be arbitrary text, and a predicted parse failure
/// scores false on every component. Comparison happens on parsed ASTs,
/// so keyword case and whitespace never matter while chart type, select
/// order, literals, clause contents, and identifier spelling all do.
inline MatchReport match_pair(const std::string& predicted, const std::string& gold) {
  ParseResult gold_parse = parse_dvq(gold);
  if (!gold_parse.ok()) {
    throw std::invalid_argument("gold query does not parse: " + gold_parse.error->to_string());
  }
  MatchReport report;
  ParseResult pred_parse = parse_dvq(predicted);
  if (!pred_parse.ok()) return report;
  const DvqAst& p = *pred_parse.ast;
  const DvqAst& g = *gold_parse.ast;
  report.vis_match = p.chart == g.chart;
  report.axis_match = p.core.select == g.core.select;
  report.data_match = detail::data_clauses_equal(p, g);
  report.overall_match = report.vis_match && report.axis_match && report.data_match;
  return report;
}

/// Exact-fraction accuracies over a corpus, total and per difficulty.
struct CorpusMetrics {
  struct Counts {
    size_t n = 0;
    size_t vis = 0;
    size_t data = 0;
    size_t axis = 0;
    size_t overall = 0;

    void add(const MatchReport& r) {
      ++n;
      vis += r.vis_match;
      data += r.data_match;
      axis += r.axis_match;
      overall += r.overall_match;
    }
  };

  Counts total;
  std::array<Counts, 4> by_hardness{};  // indexed by Hardness

  size_t n_total() const { return total.n; }
  double m_vis() const { return static_cast<double>(total.vis) / total.n; }
  double m_data() const { return static_cast<double>(total.data) / total.n; }
  double m_axis() const { return static_cast<double>(total.axis) / total.n; }
  double m_overall() const { return static_cast<double>(total.overall) / total.n; }

  nlohmann::ordered_json to_json() const {
    auto block = [](const Counts& c) {
      nlohmann::ordered_json out;
      out["n"] = c.n;
      out["vis_correct"] = c.vis;
      out["data_correct"] = c.data;
      out["axis_correct"] = c.axis;
      out["overall_correct"] = c.overall;
      if (c.n > 0) {
        out["m_vis"] = static_cast<double>(c.vis) / c.n;
        out["m_data"] = static_cast<double>(c.data) / c.n;
        out["m_axis"] = static_cast<double>(c.axis) / c.n;
        out["m_overall"] = static_cast<double>(c.overall) / c.n;
      }
      return out;
    };
    nlohmann::ordered_json out = block(total);
    nlohmann::ordered_json levels;
    for (Hardness h : kAllHardness) {
      const Counts& c = by_hardness[static_cast<size_t>(h)];
      if (c.n > 0) levels[to_string(h)] = block(c);
    }
    out["by_hardness"] = std::move(levels);
    return out;
  }

  /// Accuracy table, difficulty down, metric across.
  std::string to_text() const {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s %8s %10s\n", "level", "m_vis",
                  "m_data", "m_axis", "m_overall", "n");
    out += line;
    auto row = [&](const char* name, const Counts& c) {
      if (c.n == 0) return;
      std::snprintf(line, sizeof(line), "%-12s %8.4f %8.4f %8.4f %8.4f %10zu\n", name,
                    static_cast<double>(c.vis) / c.n, static_cast<double>(c.data) / c.n,
                    static_cast<double>(c.axis) / c.n, static_cast<double>(c.overall) / c.n,
                    c.n);
      out += line;
    };
    for (Hardness h : kAllHardness) row(to_string(h), by_hardness[static_cast<size_t>(h)]);
    row("all", total);
    return out;
  }
};

/// Scores every (predicted, gold) pair and accumulates exact count
/// ratios, bucketed by the gold query's difficulty.
inline CorpusMetrics evaluate_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("evaluate_corpus: no pairs given");
  CorpusMetrics metrics;
  for (const auto& [predicted, gold] : pairs) {
    MatchReport report = match_pair(predicted, gold);
    metrics.total.add(report);
    Hardness level = score(*parse_dvq(gold).ast).level;
    metrics.by_hardness[static_cast<size_t>(level)].add(report);
  }
  return metrics;
}

}  // namespace dvq
