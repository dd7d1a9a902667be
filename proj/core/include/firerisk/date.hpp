#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace firerisk {

/// A calendar day in the proleptic Gregorian calendar, stored as days since
/// 1970-01-01. Cheap to copy and totally ordered.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Parses `YYYY-MM-DD`. Throws ValidationError on malformed or impossible dates.
  static Date parse(std::string_view iso);
  static std::optional<Date> try_parse(std::string_view iso) noexcept;

  std::string iso() const;

  int year() const;
  unsigned month() const;
  unsigned day() const;
  /// 1-based ordinal day within the year.
  unsigned day_of_year() const;
  /// 0 = Monday ... 6 = Sunday.
  unsigned weekday() const;

  constexpr std::int32_t days() const noexcept { return days_; }

  constexpr Date operator+(std::int32_t n) const noexcept { return Date(days_ + n); }
  constexpr Date operator-(std::int32_t n) const noexcept { return Date(days_ - n); }
  constexpr std::int32_t operator-(Date other) const noexcept { return days_ - other.days_; }
  constexpr Date& operator++() noexcept {
    ++days_;
    return *this;
  }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

/// Inclusive date range [first, last].
struct DateRange {
  Date first;
  Date last;

  std::int32_t size() const noexcept { return last - first + 1; }
  bool contains(Date d) const noexcept { return d >= first && d <= last; }
};

/// Month/day pair used to anchor the start of a fire season (e.g. "01-01").
struct MonthDay {
  unsigned month = 1;
  unsigned day = 1;

  static MonthDay parse(std::string_view mm_dd);
  bool matches(Date d) const { return d.month() == month && d.day() == day; }
};

/// True for French public holidays (fixed dates plus the Easter-based ones).
bool is_french_public_holiday(Date d);

}  // namespace firerisk

template <>
struct std::hash<firerisk::Date> {
  std::size_t operator()(firerisk::Date d) const noexcept { return std::hash<std::int32_t>{}(d.days()); }
};
