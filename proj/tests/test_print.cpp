#include <catch_amalgamated.hpp>

#include <random>

#include <dvq/parse.hpp>
#include <dvq/print.hpp>

#include "support/ast_gen.hpp"

using namespace dvq;

TEST_CASE("canonical text quotes identifiers and uppercases keywords", "[print]") {
  ParseResult r = parse_dvq(
      "visualize pie select Ward, avg(Cost) from Stays where Ward != 'ICU' "
      "group by Ward having Ward > A order by avg(Cost) desc limit 3");
  REQUIRE(r.ok());
  CHECK(print_canonical(*r.ast) ==
        "Visualize PIE SELECT \"Ward\", AVG(\"Cost\") FROM \"Stays\" "
        "WHERE \"Ward\" != \"ICU\" GROUP BY \"Ward\" HAVING \"Ward\" > \"A\" "
        "ORDER BY AVG(\"Cost\") DESC LIMIT 3");
}

TEST_CASE("ascending order is printed explicitly", "[print]") {
  ParseResult r = parse_dvq("Visualize BAR SELECT A, B FROM T ORDER BY A, B DESC");
  REQUIRE(r.ok());
  CHECK(print_canonical(*r.ast).find("ORDER BY \"A\" ASC, \"B\" DESC") != std::string::npos);
}

TEST_CASE("embedded quotes double in identifiers and strings", "[print]") {
  DvqAst ast;
  ast.chart = ChartType::Bar;
  ast.core.select[0] = ColumnRef{std::nullopt, "sa\"y"};
  ast.core.select[1] = ColumnRef{std::nullopt, "B"};
  ast.core.from = "T";
  Condition cond;
  cond.column = ColumnRef{std::nullopt, "B"};
  cond.value = std::string("i\"s");
  ast.core.where.push_back(cond);
  CHECK(print_canonical(ast) ==
        "Visualize BAR SELECT \"sa\"\"y\", \"B\" FROM \"T\" WHERE \"B\" = \"i\"\"s\"");
}

TEST_CASE("numbers print in shortest round-trip form", "[print]") {
  DvqAst ast;
  ast.core.select[0] = ColumnRef{std::nullopt, "A"};
  ast.core.select[1] = ColumnRef{std::nullopt, "B"};
  ast.core.from = "T";
  Condition cond;
  cond.column = ColumnRef{std::nullopt, "A"};

  cond.value = 300.0;
  ast.core.where = {cond};
  CHECK(print_canonical(ast).find("\"A\" = 300") != std::string::npos);

  cond.value = 0.1;
  ast.core.where = {cond};
  CHECK(print_canonical(ast).find("\"A\" = 0.1") != std::string::npos);

  cond.value = -2.5;
  ast.core.where = {cond};
  CHECK(print_canonical(ast).find("\"A\" = -2.5") != std::string::npos);
}

TEST_CASE("qualified references keep their table part", "[print]") {
  ParseResult r = parse_dvq("Visualize BAR SELECT T.A, COUNT(*) FROM T GROUP BY T.A");
  REQUIRE(r.ok());
  CHECK(print_canonical(*r.ast).find("\"T\".\"A\"") != std::string::npos);
}

TEST_CASE("print then parse restores the exact tree", "[print][roundtrip]") {
  testgen::Rng rng(417);
  for (int i = 0; i < 200; ++i) {
    DvqAst ast = testgen::random_ast(rng);
    std::string text = print_canonical(ast);
    INFO(text);
    ParseResult r = parse_dvq(text);
    if (r.error) INFO(r.error->to_string());
    REQUIRE(r.ok());
    REQUIRE(*r.ast == ast);
    // and the canonical form is a fixed point
    REQUIRE(print_canonical(*r.ast) == text);
  }
}
