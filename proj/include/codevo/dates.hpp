#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace codevo {

/// Calendar day in UTC.
using Date = std::chrono::sys_days;

/// A point in time with the UTC offset it was recorded in. Comparisons use
/// the UTC instant only.
struct Timestamp {
  std::chrono::sys_seconds utc{};
  std::chrono::minutes offset{0};

  friend bool operator==(const Timestamp& a, const Timestamp& b) { return a.utc == b.utc; }
  friend auto operator<=>(const Timestamp& a, const Timestamp& b) { return a.utc <=> b.utc; }
};

Date make_date(int year, unsigned month, unsigned day);
int year_of(Date d);

/// YYYY-MM-DD
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);

/// ISO-8601 with offset, e.g. 2021-03-01T12:00:00+02:00
std::string format_timestamp(const Timestamp& ts);
/// Accepts the strict ISO-8601 form git prints for %cI / %aI.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Last second of `d` in UTC.
std::chrono::sys_seconds end_of_day(Date d);

Date today_utc();

}  // namespace codevo
