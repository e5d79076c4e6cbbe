#include <catch_amalgamated.hpp>

#include <dvq/cell.hpp>

using namespace dvq;

TEST_CASE("cells order null, numbers, text, weekdays", "[cell]") {
  Cell null{};
  Cell num{3.0};
  Cell text{std::string("abc")};
  Cell wd{Weekday{3}};

  CHECK(compare_cells(null, num) == std::strong_ordering::less);
  CHECK(compare_cells(num, text) == std::strong_ordering::less);
  CHECK(compare_cells(text, wd) == std::strong_ordering::less);
  CHECK(compare_cells(null, null) == std::strong_ordering::equal);

  CHECK(compare_cells(Cell{-1.0}, Cell{2.0}) == std::strong_ordering::less);
  CHECK(compare_cells(Cell{std::string("b")}, Cell{std::string("a")}) ==
        std::strong_ordering::greater);
  CHECK(compare_cells(Cell{Weekday{1}}, Cell{Weekday{7}}) == std::strong_ordering::less);
  CHECK(compare_cells(Cell{std::string("10")}, Cell{std::string("9")}) ==
        std::strong_ordering::less);
}

TEST_CASE("cell text forms", "[cell]") {
  CHECK(cell_text(Cell{}) == "(null)");
  CHECK(cell_text(Cell{300.0}) == "300");
  CHECK(cell_text(Cell{-2.5}) == "-2.5");
  CHECK(cell_text(Cell{std::string("ICU")}) == "ICU");
  CHECK(cell_text(Cell{Weekday{1}}) == "Mon");
  CHECK(cell_text(Cell{Weekday{7}}) == "Sun");
}

TEST_CASE("iso weekday of known dates", "[cell]") {
  CHECK(iso_weekday(1970, 1, 1) == 4);   // Thursday
  CHECK(iso_weekday(2000, 1, 1) == 6);   // Saturday
  CHECK(iso_weekday(2001, 9, 11) == 2);  // Tuesday
  CHECK(iso_weekday(2024, 2, 29) == 4);  // Thursday
  CHECK(iso_weekday(1969, 7, 20) == 7);  // Sunday
  CHECK(iso_weekday(2103, 1, 15) == iso_weekday(2103, 1, 22));
}

TEST_CASE("temporal parsing accepts the two storage shapes", "[cell]") {
  auto date = parse_temporal("2103-01-15");
  REQUIRE(date);
  CHECK(date->year == 2103);
  CHECK(date->month == 1);
  CHECK(date->day == 15);
  CHECK_FALSE(date->has_time);
  CHECK(temporal_text(*date) == "2103-01-15");

  auto stamp = parse_temporal("2103-01-15 08:30:59");
  REQUIRE(stamp);
  CHECK(stamp->has_time);
  CHECK(stamp->hour == 8);
  CHECK(stamp->second == 59);
  CHECK(temporal_text(*stamp) == "2103-01-15 08:30:59");

  auto tee = parse_temporal("2103-01-15T08:30");
  REQUIRE(tee);
  CHECK(tee->second == 0);
  CHECK(temporal_text(*tee) == "2103-01-15 08:30:00");

  CHECK(parse_temporal("  2103-01-15\r"));
}

TEST_CASE("temporal parsing rejects malformed input", "[cell]") {
  CHECK_FALSE(parse_temporal(""));
  CHECK_FALSE(parse_temporal("15/01/2103"));
  CHECK_FALSE(parse_temporal("2103-1-15"));
  CHECK_FALSE(parse_temporal("2103-13-01"));
  CHECK_FALSE(parse_temporal("2103-00-10"));
  CHECK_FALSE(parse_temporal("2103-04-31"));
  CHECK_FALSE(parse_temporal("2103-02-29"));
  CHECK_FALSE(parse_temporal("1900-02-29"));
  CHECK(parse_temporal("2000-02-29"));
  CHECK(parse_temporal("2104-02-29"));
  CHECK_FALSE(parse_temporal("2103-01-15 24:00:00"));
  CHECK_FALSE(parse_temporal("2103-01-15 08:61:00"));
  CHECK_FALSE(parse_temporal("2103-01-15 08:30:0"));
  CHECK_FALSE(parse_temporal("2103-01-15x08:30:00"));
  CHECK_FALSE(parse_temporal("2103-01-15 08:30:00 extra"));
}

TEST_CASE("binning maps timestamps to bucket keys", "[cell]") {
  Cell stamp{std::string("2103-01-15 08:30:00")};
  CHECK(bin_cell(stamp, BinUnit::Year) == Cell{2103.0});
  CHECK(bin_cell(stamp, BinUnit::Month) == Cell{std::string("2103-01")});
  CHECK(bin_cell(stamp, BinUnit::Day) == Cell{std::string("2103-01-15")});
  CHECK(bin_cell(stamp, BinUnit::Weekday) == Cell{Weekday{iso_weekday(2103, 1, 15)}});

  CHECK(is_null(bin_cell(Cell{}, BinUnit::Month)));
  CHECK(is_null(bin_cell(Cell{std::string("not a date")}, BinUnit::Month)));
  CHECK(is_null(bin_cell(Cell{42.0}, BinUnit::Year)));
}

TEST_CASE("binned axes stay temporal", "[cell]") {
  CHECK(bin_kind(BinUnit::Year) == ValueKind::Temporal);
  CHECK(bin_kind(BinUnit::Month) == ValueKind::Temporal);
  CHECK(bin_kind(BinUnit::Day) == ValueKind::Temporal);
  CHECK(bin_kind(BinUnit::Weekday) == ValueKind::Temporal);
}
