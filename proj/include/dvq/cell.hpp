#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dvq/ast.hpp"
#include "dvq/print.hpp"

namespace dvq {

/// Day-of-week bin key, ISO numbering (1 = Monday .. 7 = Sunday).
struct Weekday {
  int iso = 1;

  auto operator<=>(const Weekday&) const = default;
};

inline const char* to_string(Weekday w) {
  static const char* kNames[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
  return (w.iso >= 1 && w.iso <= 7) ? kNames[w.iso - 1] : "???";
}

/// One table cell. monostate is SQL NULL. Temporal values are stored
/// as normalized ISO-8601 text, which compares correctly as strings.
using Cell = std::variant<std::monostate, double, std::string, Weekday>;

inline bool is_null(const Cell& c) { return std::holds_alternative<std::monostate>(c); }

/// Total order over cells: null first, then numbers, text, weekdays;
/// same-type cells compare naturally. Mixed types only occur across
/// groups of one binned or untyped column, so the cross-type order just
/// needs to be deterministic (and to keep nulls first, as SQL sorts).
inline std::strong_ordering compare_cells(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return a.index() <=> b.index();
  switch (a.index()) {
    case 1: {
      double x = std::get<double>(a), y = std::get<double>(b);
      if (x < y) return std::strong_ordering::less;
      if (x > y) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case 2:
      return std::get<std::string>(a).compare(std::get<std::string>(b)) <=> 0;
    case 3:
      return std::get<Weekday>(a) <=> std::get<Weekday>(b);
    default:
      return std::strong_ordering::equal;  // both null
  }
}

/// Text form used in reports and multiset comparisons. NULL prints as
/// the group label "(null)".
inline std::string cell_text(const Cell& c) {
  switch (c.index()) {
    case 1: return number_text(std::get<double>(c));
    case 2: return std::get<std::string>(c);
    case 3: return to_string(std::get<Weekday>(c));
    default: return "(null)";
  }
}

/// Broken-down calendar timestamp; hour/minute/second stay zero for
/// date-only values.
struct CivilTime {
  int year = 0;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  bool has_time = false;
};

namespace detail {

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int days_in_month(int y, int m) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

/// Days since 1970-01-01 (Hinnant's civil-days algorithm).
inline int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  int64_t era = (y >= 0 ? y : y - 399) / 400;
  int64_t yoe = y - era * 400;
  int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

inline bool read_digits(std::string_view s, size_t pos, size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (size_t i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// ISO weekday (1 = Monday .. 7 = Sunday) of a calendar date.
inline int iso_weekday(int year, int month, int day) {
  int64_t days = detail::days_from_civil(year, month, day);
  int64_t w = (days + 3) % 7;  // 1970-01-01 is a Thursday
  if (w < 0) w += 7;
  return static_cast<int>(w) + 1;
}

/// Parses "YYYY-MM-DD" optionally followed by " HH:MM:SS" or
/// "THH:MM:SS" (seconds optional). Returns nothing for malformed or
/// out-of-range components.
inline std::optional<CivilTime> parse_temporal(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  CivilTime t;
  if (!detail::read_digits(text, 0, 4, t.year)) return std::nullopt;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!detail::read_digits(text, 5, 2, t.month)) return std::nullopt;
  if (!detail::read_digits(text, 8, 2, t.day)) return std::nullopt;
  if (t.month < 1 || t.month > 12) return std::nullopt;
  if (t.day < 1 || t.day > detail::days_in_month(t.year, t.month)) return std::nullopt;
  if (text.size() == 10) return t;
  if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
  if (!detail::read_digits(text, 11, 2, t.hour)) return std::nullopt;
  if (text.size() < 16 || text[13] != ':') return std::nullopt;
  if (!detail::read_digits(text, 14, 2, t.minute)) return std::nullopt;
  if (text.size() == 16) {
    t.second = 0;
  } else {
    if (text.size() != 19 || text[16] != ':') return std::nullopt;
    if (!detail::read_digits(text, 17, 2, t.second)) return std::nullopt;
  }
  if (t.hour > 23 || t.minute > 59 || t.second > 59) return std::nullopt;
  t.has_time = true;
  return t;
}

/// Normalized storage text: "YYYY-MM-DD" or "YYYY-MM-DD HH:MM:SS".
inline std::string temporal_text(const CivilTime& t) {
  char buf[32];
  if (t.has_time) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d", t.year, t.month, t.day,
                  t.hour, t.minute, t.second);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", t.year, t.month, t.day);
  }
  return buf;
}

/// Maps a temporal cell to its bin bucket key. YEAR buckets are
/// numbers, MONTH buckets "YYYY-MM" text, DAY buckets "YYYY-MM-DD"
/// text, WEEKDAY buckets day-of-week values. Nulls stay null;
/// unparseable text also maps to null (load_csv normalizes temporal
/// cells, so this only happens for hand-built tables).
inline Cell bin_cell(const Cell& value, BinUnit unit) {
  if (!std::holds_alternative<std::string>(value)) return Cell{};
  auto t = parse_temporal(std::get<std::string>(value));
  if (!t) return Cell{};
  char buf[16];
  switch (unit) {
    case BinUnit::Year:
      return Cell{static_cast<double>(t->year)};
    case BinUnit::Month:
      std::snprintf(buf, sizeof(buf), "%04d-%02d", t->year, t->month);
      return Cell{std::string(buf)};
    case BinUnit::Day:
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", t->year, t->month, t->day);
      return Cell{std::string(buf)};
    case BinUnit::Weekday:
      return Cell{Weekday{iso_weekday(t->year, t->month, t->day)}};
  }
  return Cell{};
}

/// Axis kind of binned output. Binning a temporal column keeps the
/// axis temporal whatever the bucket granularity; the chart layer
/// records the granularity as a time unit.
inline ValueKind bin_kind(BinUnit) { return ValueKind::Temporal; }

}  // namespace dvq
