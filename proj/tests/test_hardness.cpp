#include <catch_amalgamated.hpp>

#include <dvq/hardness.hpp>
#include <dvq/parse.hpp>

using namespace dvq;

namespace {

HardnessScore score_of(const std::string& query) {
  ParseResult r = parse_dvq(query);
  INFO(query);
  REQUIRE(r.ok());
  return score(*r.ast);
}

}  // namespace

TEST_CASE("level thresholds", "[hardness]") {
  CHECK(level_of(0) == Hardness::Easy);
  CHECK(level_of(2) == Hardness::Easy);
  CHECK(level_of(3) == Hardness::Medium);
  CHECK(level_of(4) == Hardness::Medium);
  CHECK(level_of(5) == Hardness::Hard);
  CHECK(level_of(6) == Hardness::Hard);
  CHECK(level_of(7) == Hardness::ExtraHard);
  CHECK(level_of(12) == Hardness::ExtraHard);
}

TEST_CASE("component scores add up", "[hardness]") {
  HardnessScore s = score_of("Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) "
                             "FROM DEMOGRAPHIC WHERE SUBJECT_ID = \"9575\" "
                             "GROUP BY DISCHTIME BIN DISCHTIME BY MONTH");
  CHECK(s.s_select == 2);
  CHECK(s.s_table == 0);
  CHECK(s.s_group == 1);
  CHECK(s.s_order == 0);
  CHECK(s.s_conditions == 1);
  CHECK(s.s_bin == 1);
  CHECK(s.s_total == 5);
  CHECK(s.level == Hardness::Hard);
}

TEST_CASE("select scoring counts aggregates and distinct bare columns", "[hardness]") {
  CHECK(score_of("Visualize BAR SELECT A, B FROM T").s_select == 2);
  CHECK(score_of("Visualize BAR SELECT A, A FROM T").s_select == 1);
  CHECK(score_of("Visualize BAR SELECT a, T.A FROM T").s_select == 2);
  CHECK(score_of("Visualize BAR SELECT COUNT(*), SUM(A) FROM T").s_select == 2);
  CHECK(score_of("Visualize BAR SELECT A, COUNT(A) FROM T GROUP BY A").s_select == 2);
}

TEST_CASE("joins, grouping, ordering, and binning each score", "[hardness]") {
  CHECK(score_of("Visualize BAR SELECT T.A, U.B FROM T JOIN U ON T.K = U.K").s_table == 1);
  CHECK(score_of("Visualize BAR SELECT T.A, V.C FROM T JOIN U ON T.K = U.K "
                 "JOIN V ON U.K = V.K")
            .s_table == 2);
  CHECK(score_of("Visualize BAR SELECT A, COUNT(*) FROM T GROUP BY A").s_group == 1);
  CHECK(score_of("Visualize BAR SELECT A, B FROM T ORDER BY A, B DESC").s_order == 2);
  CHECK(score_of("Visualize BAR SELECT A, COUNT(*) FROM T GROUP BY A BIN A BY YEAR")
            .s_bin == 1);
}

TEST_CASE("conditions count where, having, and limit", "[hardness]") {
  CHECK(score_of("Visualize BAR SELECT A, B FROM T WHERE A = \"x\" AND B > 3")
            .s_conditions == 2);
  CHECK(score_of("Visualize BAR SELECT A, COUNT(*) FROM T GROUP BY A "
                 "HAVING A != \"x\" LIMIT 5")
            .s_conditions == 2);
  CHECK(score_of("Visualize BAR SELECT A, B FROM T LIMIT 5").s_conditions == 1);
  CHECK(score_of("Visualize BAR SELECT A, B FROM T").s_conditions == 0);
}

TEST_CASE("each total from two to seven lands on its level", "[hardness]") {
  struct Probe {
    const char* query;
    int total;
    Hardness level;
  };
  const Probe probes[] = {
      {"Visualize BAR SELECT A, B FROM T", 2, Hardness::Easy},
      {"Visualize BAR SELECT A, B FROM T LIMIT 3", 3, Hardness::Medium},
      {"Visualize BAR SELECT A, B FROM T WHERE A = \"x\" LIMIT 3", 4, Hardness::Medium},
      {"Visualize BAR SELECT A, COUNT(*) FROM T WHERE B = \"x\" GROUP BY A LIMIT 3", 5,
       Hardness::Hard},
      {"Visualize BAR SELECT A, COUNT(*) FROM T WHERE B = \"x\" GROUP BY A "
       "ORDER BY COUNT(*) DESC LIMIT 3",
       6, Hardness::Hard},
      {"Visualize BAR SELECT A, COUNT(*) FROM T WHERE B = \"x\" GROUP BY A "
       "HAVING A != \"y\" ORDER BY COUNT(*) DESC LIMIT 3",
       7, Hardness::ExtraHard},
  };
  for (const Probe& probe : probes) {
    HardnessScore s = score_of(probe.query);
    CAPTURE(probe.query);
    CHECK(s.s_total == probe.total);
    CHECK(s.level == probe.level);
  }
}

TEST_CASE("histogram buckets by chart type and level", "[hardness]") {
  auto ast_of = [](const std::string& q) { return *parse_dvq(q).ast; };
  std::vector<DvqAst> corpus = {
      ast_of("Visualize BAR SELECT A, B FROM T"),
      ast_of("Visualize BAR SELECT A, B FROM T LIMIT 3"),
      ast_of("Visualize PIE SELECT A, COUNT(*) FROM T WHERE B = \"x\" GROUP BY A LIMIT 3"),
  };
  HardnessHistogram hist = bucket_corpus(corpus);
  CHECK(hist.total == 3);
  CHECK(hist.at(ChartType::Bar, Hardness::Easy) == 1);
  CHECK(hist.at(ChartType::Bar, Hardness::Medium) == 1);
  CHECK(hist.at(ChartType::Pie, Hardness::Hard) == 1);
  CHECK(hist.level_total(Hardness::Medium) == 1);
  CHECK(hist.chart_total(ChartType::Bar) == 2);

  std::string table = hist.to_text();
  CHECK(table.find("EXTRA_HARD") != std::string::npos);
  CHECK(table.find("BAR") != std::string::npos);

  auto j = hist.to_json();
  CHECK(j["BAR"]["EASY"] == 1);
  CHECK(j["total"] == 3);
}
