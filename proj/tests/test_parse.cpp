#include <catch_amalgamated.hpp>

#include <random>
#include <string>

#include <dvq/parse.hpp>
#include <dvq/print.hpp>

using namespace dvq;

namespace {

DvqAst parse_ok(const std::string& text) {
  ParseResult r = parse_dvq(text);
  INFO(text);
  if (r.error) INFO(r.error->to_string());
  REQUIRE(r.ok());
  return *r.ast;
}

ParseError parse_err(const std::string& text) {
  ParseResult r = parse_dvq(text);
  INFO(text);
  REQUIRE_FALSE(r.ok());
  return *r.error;
}

}  // namespace

TEST_CASE("worked example parses to its canonical form", "[parse]") {
  DvqAst ast = parse_ok(
      "Visualize SCATTER SELECT DISCHTIME, COUNT(DAYS_STAY) FROM DEMOGRAPHIC "
      "WHERE SUBJECT_ID = \"9575\" GROUP BY DISCHTIME BIN DISCHTIME BY MONTH");
  CHECK(ast.chart == ChartType::Scatter);
  REQUIRE(ast.bin.has_value());
  CHECK(ast.bin->unit == BinUnit::Month);
  CHECK(print_canonical(ast) ==
        "Visualize SCATTER SELECT \"DISCHTIME\", COUNT(\"DAYS_STAY\") FROM \"DEMOGRAPHIC\" "
        "WHERE \"SUBJECT_ID\" = \"9575\" GROUP BY \"DISCHTIME\" BIN \"DISCHTIME\" BY MONTH");
}

TEST_CASE("keywords fold case while identifiers keep it", "[parse]") {
  DvqAst ast = parse_ok("visualize bar select Age, count(*) from People group by Age");
  CHECK(ast.chart == ChartType::Bar);
  const auto& x = std::get<ColumnRef>(ast.core.select[0]);
  CHECK(x.column == "Age");
  CHECK(ast.core.from == "People");
}

TEST_CASE("quoted identifiers admit spaces and doubled quotes", "[parse]") {
  DvqAst ast = parse_ok(R"(Visualize BAR SELECT "First Name", "say ""hi""" FROM "T 1")");
  CHECK(std::get<ColumnRef>(ast.core.select[0]).column == "First Name");
  CHECK(std::get<ColumnRef>(ast.core.select[1]).column == "say \"hi\"");
  CHECK(ast.core.from == "T 1");
}

TEST_CASE("bare identifiers in literal position read as strings", "[parse]") {
  DvqAst ast = parse_ok("Visualize BAR SELECT A, B FROM T WHERE A = ICU");
  REQUIRE(ast.core.where.size() == 1);
  CHECK(std::get<std::string>(ast.core.where[0].value) == "ICU");
}

TEST_CASE("single-quoted strings and numeric literals", "[parse]") {
  DvqAst ast = parse_ok(
      "Visualize BAR SELECT A, B FROM T WHERE A = 'it''s' AND B >= -12.5 AND A != 3e2");
  CHECK(std::get<std::string>(ast.core.where[0].value) == "it's");
  CHECK(std::get<double>(ast.core.where[1].value) == -12.5);
  CHECK(std::get<double>(ast.core.where[2].value) == 300.0);
}

TEST_CASE("angle-bracket inequality reads as not-equal", "[parse]") {
  DvqAst a = parse_ok("Visualize BAR SELECT A, B FROM T WHERE A <> 1");
  DvqAst b = parse_ok("Visualize BAR SELECT A, B FROM T WHERE A != 1");
  CHECK(a == b);
  CHECK(a.core.where[0].op == CompareOp::Ne);
}

TEST_CASE("joins parse with qualified equality conditions", "[parse]") {
  DvqAst ast = parse_ok(
      "Visualize PIE SELECT T.A, COUNT(*) FROM T INNER JOIN U ON T.ID = U.ID "
      "JOIN V ON U.ID = V.ID GROUP BY T.A");
  REQUIRE(ast.core.joins.size() == 2);
  CHECK(ast.core.joins[0].table == "U");
  CHECK(ast.core.joins[0].left.table == "T");
  CHECK(ast.core.joins[1].right.column == "ID");
}

TEST_CASE("order by carries per-item direction and limit parses", "[parse]") {
  DvqAst ast = parse_ok(
      "Visualize BAR SELECT A, COUNT(*) FROM T GROUP BY A "
      "ORDER BY COUNT(*) DESC, A LIMIT 7");
  REQUIRE(ast.core.order_by.size() == 2);
  CHECK(ast.core.order_by[0].descending);
  CHECK_FALSE(ast.core.order_by[1].descending);
  CHECK(ast.core.limit == 7);
}

TEST_CASE("distinct count and count star parse; other shapes do not", "[parse]") {
  DvqAst ast = parse_ok("Visualize BAR SELECT A, COUNT(DISTINCT B) FROM T GROUP BY A");
  const auto& agg = std::get<Aggregate>(ast.core.select[1]);
  CHECK(agg.distinct);
  CHECK(agg.func == AggFunc::Count);

  CHECK(parse_err("Visualize BAR SELECT A, SUM(*) FROM T").message.find("*") !=
        std::string::npos);
  parse_err("Visualize BAR SELECT A, AVG(DISTINCT B) FROM T");
}

TEST_CASE("select arity is exactly two", "[parse]") {
  ParseError one = parse_err("Visualize BAR SELECT A FROM T");
  CHECK(one.message.find("two") != std::string::npos);
  parse_err("Visualize BAR SELECT A, B, C FROM T");
}

TEST_CASE("errors carry line and column positions", "[parse]") {
  ParseError err = parse_err("Visualize BAR SELECT A,\n  % FROM T");
  CHECK(err.line == 2);
  CHECK(err.column == 3);

  ParseError bad_chart = parse_err("Visualize TREEMAP SELECT A, B FROM T");
  CHECK(bad_chart.line == 1);
  CHECK(bad_chart.column == 11);
  CHECK(bad_chart.token == "TREEMAP");
}

TEST_CASE("unterminated quote is a positioned error, not a crash", "[parse]") {
  ParseError err = parse_err("Visualize BAR SELECT \"A, B FROM T");
  CHECK(err.line == 1);
  CHECK(err.message.find("unterminated") != std::string::npos);
}

TEST_CASE("empty and whitespace-only input report an empty query", "[parse]") {
  CHECK(parse_err("").message.find("empty") != std::string::npos);
  CHECK(parse_err("   \n\t").message.find("empty") != std::string::npos);
}

TEST_CASE("trailing tokens after a complete query are rejected", "[parse]") {
  parse_err("Visualize BAR SELECT A, B FROM T LIMIT 3 garbage");
  parse_err("Visualize BAR SELECT A, B FROM T BIN A BY MONTH extra");
}

TEST_CASE("bin column must appear in the query", "[parse]") {
  ParseError err = parse_err("Visualize BAR SELECT A, COUNT(*) FROM T GROUP BY A BIN Z BY YEAR");
  CHECK(err.message.find("BIN") != std::string::npos);
  parse_ok("Visualize BAR SELECT A, COUNT(B) FROM T GROUP BY A BIN B BY YEAR");
  parse_ok("Visualize BAR SELECT T.A, COUNT(*) FROM T GROUP BY T.A BIN A BY YEAR");
}

TEST_CASE("limit must be a plain non-negative integer", "[parse]") {
  parse_err("Visualize BAR SELECT A, B FROM T LIMIT -3");
  parse_err("Visualize BAR SELECT A, B FROM T LIMIT 2.5");
  parse_err("Visualize BAR SELECT A, B FROM T LIMIT many");
  CHECK(parse_ok("Visualize BAR SELECT A, B FROM T LIMIT 0").core.limit == 0);
}

TEST_CASE("sql core parses without the visualize prefix", "[parse]") {
  SqlParseResult r = parse_sql_core("SELECT A, COUNT(*) FROM T GROUP BY A");
  REQUIRE(r.ok());
  CHECK(r.core->from == "T");
  CHECK_FALSE(parse_sql_core("Visualize BAR SELECT A, B FROM T").ok());
}

TEST_CASE("fuzzed inputs never crash and always position errors", "[parse]") {
  std::mt19937_64 rng(20088);
  const std::string alphabet =
      "Visualize SELECT FROM WHERE GROUP BY \"'(),.*!<>= \n\tABCxyz0189-%_";
  for (int i = 0; i < 2000; ++i) {
    std::string input;
    size_t len = rng() % 120;
    for (size_t k = 0; k < len; ++k) input += alphabet[rng() % alphabet.size()];
    ParseResult r = parse_dvq(input);
    if (!r.ok()) {
      REQUIRE(r.error->line >= 1);
      REQUIRE(r.error->column >= 1);
    }
  }
}
