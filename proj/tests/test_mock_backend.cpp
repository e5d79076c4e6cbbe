#include <catch_amalgamated.hpp>

#include <dvq/mockllm.hpp>

using namespace dvq;

namespace {

DecodingParams params_n(int n) {
  DecodingParams p;
  p.n = n;
  return p;
}

const char* kSchemaText =
    "DEMOGRAPHIC(SUBJECT_ID:nominal, NAME:nominal, ADMITTIME:temporal, "
    "DAYS_STAY:quantitative)\n"
    "LAB(SUBJECT_ID:nominal, VALUENUM:quantitative)";

std::string sql_prompt(const std::string& sql) {
  return "Translate this query.\nSchema:\n" + std::string(kSchemaText) + "\n\nSQL:\n" + sql +
         "\n";
}

}  // namespace

TEST_CASE("prompt sections are found by their last line-start marker", "[mock]") {
  std::string text = detail::extract_section(
      "Intro mentions SQL: inline, which is not a marker.\nSQL:\nSELECT 1\n", "SQL:");
  CHECK(text == "SELECT 1");

  text = detail::extract_section("Schema:\nT(a:nominal)\nSQL:\nSELECT 1\n", "Schema:");
  CHECK(text == "T(a:nominal)");

  CHECK(detail::extract_section("no markers here", "SQL:").empty());
}

TEST_CASE("schema descriptions parse back into schemas", "[mock]") {
  Schema schema = detail::schema_from_description(kSchemaText);
  REQUIRE(schema.tables.size() == 2);
  CHECK(schema.tables[0].name == "DEMOGRAPHIC");
  REQUIRE(schema.tables[0].columns.size() == 4);
  CHECK(schema.tables[0].columns[2].kind == ValueKind::Temporal);
  CHECK(schema.tables[0].columns[3].kind == ValueKind::Quantitative);
  CHECK(schema.tables[1].columns[0].kind == ValueKind::Nominal);
}

TEST_CASE("sql prompts come back as parseable visualization queries", "[mock]") {
  MockRuleBackend backend;
  auto out = backend.complete(
      sql_prompt("SELECT NAME, COUNT(*) FROM DEMOGRAPHIC GROUP BY NAME"), params_n(1));
  REQUIRE(out.size() == 1);
  ParseResult parsed = parse_dvq(out[0]);
  REQUIRE(parsed.ok());
  Schema schema = detail::schema_from_description(kSchemaText);
  CHECK(validate(*parsed.ast, schema).empty());
}

TEST_CASE("the mock moves a nominal second column to the x axis", "[mock]") {
  MockRuleBackend backend;
  auto out = backend.complete(
      sql_prompt("SELECT DAYS_STAY, NAME FROM DEMOGRAPHIC"), params_n(1));
  ParseResult parsed = parse_dvq(out[0]);
  REQUIRE(parsed.ok());
  const auto& x = std::get<ColumnRef>(parsed.ast->core.select[0]);
  const auto& y = std::get<ColumnRef>(parsed.ast->core.select[1]);
  CHECK(x.column == "NAME");
  CHECK(y.column == "DAYS_STAY");
}

TEST_CASE("temporal x axes may gain a bin clause", "[mock]") {
  MockRuleBackend backend;
  bool saw_bin = false;
  for (const char* sql : {
           "SELECT ADMITTIME, COUNT(*) FROM DEMOGRAPHIC GROUP BY ADMITTIME",
           "SELECT ADMITTIME, DAYS_STAY FROM DEMOGRAPHIC",
           "SELECT ADMITTIME, COUNT(*) FROM DEMOGRAPHIC GROUP BY ADMITTIME LIMIT 5",
           "SELECT ADMITTIME, AVG(DAYS_STAY) FROM DEMOGRAPHIC GROUP BY ADMITTIME",
       }) {
    auto out = backend.complete(sql_prompt(sql), params_n(1));
    ParseResult parsed = parse_dvq(out[0]);
    REQUIRE(parsed.ok());
    CHECK((parsed.ast->chart == ChartType::Line || parsed.ast->chart == ChartType::Scatter));
    if (parsed.ast->bin) {
      saw_bin = true;
      CHECK(parsed.ast->bin->column.column == "ADMITTIME");
    }
  }
  CHECK(saw_bin);
}

TEST_CASE("answers are deterministic and replicate n times", "[mock]") {
  MockRuleBackend backend;
  std::string prompt = sql_prompt("SELECT NAME, COUNT(*) FROM DEMOGRAPHIC GROUP BY NAME");
  auto a = backend.complete(prompt, params_n(1));
  auto b = backend.complete(prompt, params_n(3));
  REQUIRE(b.size() == 3);
  CHECK(b[0] == a[0]);
  CHECK(b[1] == a[0]);
  CHECK(b[2] == a[0]);
}

TEST_CASE("unreadable sql earns a refusal", "[mock]") {
  MockRuleBackend backend;
  auto out = backend.complete(sql_prompt("SELECT a, b, c FROM t"), params_n(1));
  CHECK_FALSE(parse_dvq(out[0]).ok());
  CHECK(out[0].find("Sorry") != std::string::npos);

  auto nothing = backend.complete("just chatting", params_n(1));
  CHECK_FALSE(parse_dvq(nothing[0]).ok());
}

TEST_CASE("dvq prompts come back as two labeled phrasings", "[mock]") {
  MockRuleBackend backend;
  std::string prompt =
      "Phrase this query two ways.\nDVQ:\n"
      "Visualize BAR SELECT \"NAME\", COUNT(*) FROM \"DEMOGRAPHIC\" "
      "WHERE \"DAYS_STAY\" > 3 GROUP BY \"NAME\" ORDER BY COUNT(*) DESC LIMIT 5\n";
  auto out = backend.complete(prompt, params_n(1));
  REQUIRE(out.size() == 1);
  std::string text = out[0];
  size_t imp = text.find("Imperative: ");
  size_t intr = text.find("\nInterrogative: ");
  REQUIRE(imp == 0);
  REQUIRE(intr != std::string::npos);
  CHECK(text.find("bar chart") != std::string::npos);
  CHECK(text.find("NAME") != std::string::npos);
  CHECK(text.find("DAYS_STAY is above 3") != std::string::npos);
  CHECK(text.find("descending") != std::string::npos);
  CHECK(text.find("5 entries") != std::string::npos);
  CHECK(text.find('?') != std::string::npos);
}

TEST_CASE("an unreadable dvq earns a refusal", "[mock]") {
  MockRuleBackend backend;
  auto out = backend.complete("DVQ:\nVisualize NOTHING AT ALL\n", params_n(1));
  CHECK(out[0].find("Sorry") != std::string::npos);
  CHECK(out[0].find("Imperative:") == std::string::npos);
}
