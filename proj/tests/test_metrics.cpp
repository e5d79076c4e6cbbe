#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <dvq/metrics.hpp>

using namespace dvq;

namespace {

const char* kGold =
    "Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) FROM DEMOGRAPHIC "
    "WHERE SUBJECT_ID = \"9575\" GROUP BY DISCHTIME BIN DISCHTIME BY MONTH";

/// Twenty pairs from five bases: per base one identity, one chart-type
/// mutation, one WHERE-literal mutation, and one select swap.
std::vector<std::pair<std::string, std::string>> planted_corpus() {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 5; ++i) {
    std::string col = "C" + std::to_string(i);
    std::string lit = "v" + std::to_string(i);
    std::string gold = "Visualize BAR SELECT " + col + ", COUNT(*) FROM T WHERE K = '" +
                       lit + "' GROUP BY " + col;
    std::string chart_mut = gold;
    chart_mut.replace(chart_mut.find("BAR"), 3, "PIE");
    std::string lit_mut = gold;
    lit_mut.replace(lit_mut.find(lit), lit.size(), "w" + std::to_string(i));
    std::string swapped = "Visualize BAR SELECT COUNT(*), " + col + " FROM T WHERE K = '" +
                          lit + "' GROUP BY " + col;
    pairs.emplace_back(gold, gold);
    pairs.emplace_back(chart_mut, gold);
    pairs.emplace_back(lit_mut, gold);
    pairs.emplace_back(swapped, gold);
  }
  return pairs;
}

}  // namespace

TEST_CASE("identical queries match on every component", "[metrics]") {
  MatchReport r = match_pair(kGold, kGold);
  CHECK(r.vis_match);
  CHECK(r.data_match);
  CHECK(r.axis_match);
  CHECK(r.overall_match);
}

TEST_CASE("formatting differences never count against a prediction", "[metrics]") {
  MatchReport r = match_pair(
      "visualize   scatter SELECT \"DISCHTIME\" , count( DAYS_STAY )\n"
      "FROM demographic WHERE SUBJECT_ID = \"9575\" group by DISCHTIME "
      "bin DISCHTIME by month",
      kGold);
  CHECK(r.overall_match);
}

TEST_CASE("swapped select items fail the axis component only", "[metrics]") {
  MatchReport r = match_pair(
      "Visualize SCATTER SELECT COUNT(DAYS_STAY), DISCHTIME FROM DEMOGRAPHIC "
      "WHERE SUBJECT_ID = \"9575\" GROUP BY DISCHTIME BIN DISCHTIME BY MONTH",
      kGold);
  CHECK(r.vis_match);
  CHECK(r.data_match);
  CHECK_FALSE(r.axis_match);
  CHECK_FALSE(r.overall_match);
}

TEST_CASE("a different chart type fails the vis component only", "[metrics]") {
  std::string predicted = kGold;
  predicted.replace(predicted.find("SCATTER"), 7, "BAR");
  MatchReport r = match_pair(predicted, kGold);
  CHECK_FALSE(r.vis_match);
  CHECK(r.data_match);
  CHECK(r.axis_match);
  CHECK_FALSE(r.overall_match);
}

TEST_CASE("one character of a literal breaks the data component", "[metrics]") {
  std::string predicted = kGold;
  predicted.replace(predicted.find("9575"), 4, "9576");
  MatchReport r = match_pair(predicted, kGold);
  CHECK(r.vis_match);
  CHECK(r.axis_match);
  CHECK_FALSE(r.data_match);
  CHECK_FALSE(r.overall_match);
}

TEST_CASE("clause differences break the data component", "[metrics]") {
  MatchReport r = match_pair(
      "Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) FROM DEMOGRAPHIC "
      "WHERE SUBJECT_ID = \"9575\" GROUP BY DISCHTIME BIN DISCHTIME BY YEAR",
      kGold);
  CHECK_FALSE(r.data_match);

  r = match_pair(
      "Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) FROM DEMOGRAPHIC "
      "GROUP BY DISCHTIME BIN DISCHTIME BY MONTH",
      kGold);
  CHECK_FALSE(r.data_match);
  CHECK(r.axis_match);
}

TEST_CASE("unparseable predictions score false everywhere", "[metrics]") {
  MatchReport r = match_pair("I cannot translate that request.", kGold);
  CHECK_FALSE(r.vis_match);
  CHECK_FALSE(r.data_match);
  CHECK_FALSE(r.axis_match);
  CHECK_FALSE(r.overall_match);
}

TEST_CASE("an unparseable gold query is a caller error", "[metrics]") {
  CHECK_THROWS_AS(match_pair(kGold, "Visualize TREEMAP SELECT A B"),
                  std::invalid_argument);
}

TEST_CASE("the planted corpus lands on exact fractions", "[metrics]") {
  CorpusMetrics m = evaluate_corpus(planted_corpus());
  REQUIRE(m.n_total() == 20);
  CHECK(m.m_vis() == 0.75);
  CHECK(m.m_data() == 0.75);
  CHECK(m.m_axis() == 0.75);
  CHECK(m.m_overall() == 0.25);
  CHECK(m.m_overall() <= m.m_vis());
  CHECK(m.m_overall() <= m.m_data());
  CHECK(m.m_overall() <= m.m_axis());

  const auto& medium = m.by_hardness[static_cast<size_t>(Hardness::Medium)];
  CHECK(medium.n == 20);

  auto j = m.to_json();
  CHECK(j["n"] == 20);
  CHECK(j["m_overall"] == 0.25);
  CHECK(j["by_hardness"].contains("MEDIUM"));
  CHECK(m.to_text().find("MEDIUM") != std::string::npos);
}

TEST_CASE("empty corpora are rejected", "[metrics]") {
  CHECK_THROWS_AS(evaluate_corpus({}), std::invalid_argument);
}
