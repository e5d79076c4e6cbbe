#include <catch_amalgamated.hpp>

#include <dvq/execute.hpp>
#include <dvq/parse.hpp>
#include <dvq/print.hpp>
#include <dvq/table.hpp>
#include <dvq/validate.hpp>

#include "support/ast_gen.hpp"
#include "support/sqlite_oracle.hpp"

using namespace dvq;

namespace {

const Database& fixture_db() {
  static Database db = load_database_dir(std::string(DVQ_FIXTURE_DIR) + "/db/mimic_demo");
  return db;
}

}  // namespace

TEST_CASE("engine output matches a reference sql engine", "[oracle]") {
  const Database& db = fixture_db();
  testoracle::SqliteOracle oracle(db);
  testgen::ValidDvqGen gen(db);
  testgen::Rng rng(20103);

  size_t checked = 0;
  for (size_t i = 0; i < 160; ++i) {
    DvqAst ast = gen.next(rng);
    std::string text = print_canonical(ast);
    INFO("query: " << text);
    INFO("sql:   " << oracle.to_sql(ast));
    REQUIRE(validate(ast, db.schema).empty());

    ResultSet rs = execute(ast, db);
    auto mine = testoracle::sorted_rows(rs.rows);
    auto theirs = testoracle::sorted_rows(oracle.run(ast));
    REQUIRE(mine.size() == theirs.size());
    for (size_t r = 0; r < mine.size(); ++r) {
      CAPTURE(r, cell_text(mine[r].first), cell_text(mine[r].second),
              cell_text(theirs[r].first), cell_text(theirs[r].second));
      REQUIRE(mine[r] == theirs[r]);
    }
    ++checked;
  }
  CHECK(checked == 160);
}

TEST_CASE("generated queries survive a print and parse trip", "[oracle]") {
  const Database& db = fixture_db();
  testgen::ValidDvqGen gen(db);
  testgen::Rng rng(777);
  for (size_t i = 0; i < 60; ++i) {
    DvqAst ast = gen.next(rng);
    std::string text = print_canonical(ast);
    ParseResult back = parse_dvq(text);
    INFO(text);
    REQUIRE(back.ok());
    CHECK(*back.ast == ast);
  }
}
