#include <catch_amalgamated.hpp>

#include <dvq/chart.hpp>
#include <dvq/parse.hpp>

using namespace dvq;

namespace {

Cell S(const char* text) { return Cell{std::string(text)}; }
Cell N(double value) { return Cell{value}; }

DvqAst ast_of(const std::string& query) {
  ParseResult r = parse_dvq(query);
  INFO(query);
  REQUIRE(r.ok());
  return *r.ast;
}

}  // namespace

TEST_CASE("chart types map to vega-lite marks", "[chart]") {
  CHECK(std::string(mark_of(ChartType::Bar)) == "bar");
  CHECK(std::string(mark_of(ChartType::Pie)) == "arc");
  CHECK(std::string(mark_of(ChartType::Line)) == "line");
  CHECK(std::string(mark_of(ChartType::Scatter)) == "point");
}

TEST_CASE("bin units map to vega-lite time units", "[chart]") {
  CHECK(std::string(time_unit_of(BinUnit::Year)) == "year");
  CHECK(std::string(time_unit_of(BinUnit::Month)) == "yearmonth");
  CHECK(std::string(time_unit_of(BinUnit::Day)) == "yearmonthdate");
  CHECK(std::string(time_unit_of(BinUnit::Weekday)) == "day");
}

TEST_CASE("lowering carries fields, kinds, and the time unit", "[chart]") {
  DvqAst ast = ast_of(
      "Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) FROM DEMOGRAPHIC "
      "GROUP BY DISCHTIME BIN DISCHTIME BY MONTH");
  ResultSet rs;
  rs.x_kind = ValueKind::Temporal;
  rs.y_kind = ValueKind::Quantitative;
  rs.rows = {{S("2103-01"), N(2)}, {S("2103-02"), N(1)}};

  ChartSpec spec = lower(ast, rs);
  CHECK(spec.x.field == "DISCHTIME");
  CHECK(spec.y.field == "COUNT(DAYS_STAY)");
  CHECK(spec.x.type == ValueKind::Temporal);
  CHECK(spec.y.type == ValueKind::Quantitative);
  REQUIRE(spec.x.time_unit);
  CHECK(*spec.x.time_unit == "yearmonth");
  CHECK_FALSE(spec.y.time_unit);

  auto doc = spec.to_json();
  CHECK(doc["$schema"] == "https://vega.github.io/schema/vega-lite/v5.json");
  CHECK(doc["mark"] == "point");
  CHECK(doc["encoding"]["x"]["field"] == "DISCHTIME");
  CHECK(doc["encoding"]["x"]["type"] == "temporal");
  CHECK(doc["encoding"]["x"]["timeUnit"] == "yearmonth");
  CHECK(doc["encoding"]["y"]["field"] == "COUNT(DAYS_STAY)");
  CHECK(doc["encoding"]["y"]["type"] == "quantitative");
  REQUIRE(doc["data"]["values"].size() == 2);
  CHECK(doc["data"]["values"][0]["DISCHTIME"] == "2103-01");
  CHECK(doc["data"]["values"][0]["COUNT(DAYS_STAY)"] == 2.0);
  CHECK_FALSE(doc.contains("title"));
}

TEST_CASE("pie charts encode theta and color", "[chart]") {
  DvqAst ast = ast_of("Visualize PIE SELECT WARD, COUNT(*) FROM VISITS GROUP BY WARD");
  ResultSet rs;
  rs.y_kind = ValueKind::Quantitative;
  rs.rows = {{S("ICU"), N(3)}};
  auto doc = lower(ast, rs).to_json();
  CHECK(doc["mark"] == "arc");
  CHECK(doc["encoding"]["theta"]["field"] == "COUNT(*)");
  CHECK(doc["encoding"]["color"]["field"] == "WARD");
  CHECK_FALSE(doc["encoding"].contains("x"));
}

TEST_CASE("titles, nulls, and weekdays serialize cleanly", "[chart]") {
  DvqAst ast = ast_of("Visualize BAR SELECT T, COUNT(*) FROM EV GROUP BY T "
                      "BIN T BY WEEKDAY");
  ResultSet rs;
  rs.x_kind = ValueKind::Temporal;
  rs.y_kind = ValueKind::Quantitative;
  rs.rows = {{Cell{}, N(1)}, {Cell{Weekday{1}}, N(2)}};
  auto doc = lower(ast, rs, "Events by weekday").to_json();
  CHECK(doc["title"] == "Events by weekday");
  CHECK(doc["encoding"]["x"]["timeUnit"] == "day");
  CHECK(doc["data"]["values"][0]["T"].is_null());
  CHECK(doc["data"]["values"][1]["T"] == "Mon");
}

TEST_CASE("qualified and distinct selections lose their quotes only", "[chart]") {
  DvqAst ast = ast_of("Visualize BAR SELECT EV.KIND, COUNT(DISTINCT EV.PATIENT) FROM EV "
                      "GROUP BY EV.KIND");
  ResultSet rs;
  ChartSpec spec = lower(ast, rs);
  CHECK(spec.x.field == "EV.KIND");
  CHECK(spec.y.field == "COUNT(DISTINCT EV.PATIENT)");
}

TEST_CASE("result sets serialize with kinds and row arrays", "[chart]") {
  ResultSet rs;
  rs.x_kind = ValueKind::Temporal;
  rs.y_kind = ValueKind::Quantitative;
  rs.rows = {{S("2103-01"), N(2)}, {Cell{}, Cell{}}};
  auto doc = result_set_to_json(rs);
  CHECK(doc["x_kind"] == "temporal");
  CHECK(doc["y_kind"] == "quantitative");
  CHECK(doc["n_values"] == 2);
  CHECK(doc["rows"][0][0] == "2103-01");
  CHECK(doc["rows"][1][0].is_null());
}
