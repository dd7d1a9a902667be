#include "firerisk/date.hpp"

#include <charconv>
#include <cstdio>

#include "firerisk/error.hpp"

namespace firerisk {

namespace chr = std::chrono;

namespace {

chr::year_month_day ymd_of(Date d) { return chr::year_month_day{chr::sys_days{chr::days{d.days()}}}; }

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Anonymous Gregorian algorithm.
Date easter_sunday(int year) {
  const int a = year % 19;
  const int b = year / 100;
  const int c = year % 100;
  const int d = b / 4;
  const int e = b % 4;
  const int f = (b + 8) / 25;
  const int g = (b - f + 1) / 3;
  const int h = (19 * a + b - d - g + 15) % 30;
  const int i = c / 4;
  const int k = c % 4;
  const int l = (32 + 2 * e + 2 * i - h - k) % 7;
  const int m = (a + 11 * h + 22 * l) / 451;
  const int month = (h + l - 7 * m + 114) / 31;
  const int day = (h + l - 7 * m + 114) % 31 + 1;
  return Date::from_ymd(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                          std::to_string(day));
  }
  return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

std::optional<Date> Date::try_parse(std::string_view iso) noexcept {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) || !parse_uint(iso.substr(8, 2), d)) {
    return std::nullopt;
  }
  const chr::year_month_day ymd{chr::year{static_cast<int>(y)}, chr::month{m}, chr::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
  if (auto d = try_parse(iso)) return *d;
  throw ValidationError("malformed ISO date '" + std::string(iso) + "'");
}

std::string Date::iso() const {
  const auto ymd = ymd_of(*this);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::year() const { return static_cast<int>(ymd_of(*this).year()); }
unsigned Date::month() const { return static_cast<unsigned>(ymd_of(*this).month()); }
unsigned Date::day() const { return static_cast<unsigned>(ymd_of(*this).day()); }

unsigned Date::day_of_year() const {
  return static_cast<unsigned>(*this - from_ymd(year(), 1, 1)) + 1;
}

unsigned Date::weekday() const {
  const chr::weekday wd{chr::sys_days{chr::days{days_}}};
  return wd.iso_encoding() - 1;
}

MonthDay MonthDay::parse(std::string_view mm_dd) {
  unsigned m = 0, d = 0;
  if (mm_dd.size() != 5 || mm_dd[2] != '-' || !parse_uint(mm_dd.substr(0, 2), m) ||
      !parse_uint(mm_dd.substr(3, 2), d) || m < 1 || m > 12 || d < 1 || d > 31) {
    throw ValidationError("expected MM-DD, got '" + std::string(mm_dd) + "'");
  }
  // Validate against a leap year so 02-29 is accepted.
  (void)Date::from_ymd(2000, m, d);
  return MonthDay{m, d};
}

bool is_french_public_holiday(Date d) {
  const unsigned m = d.month();
  const unsigned day = d.day();
  if ((m == 1 && day == 1) || (m == 5 && (day == 1 || day == 8)) || (m == 7 && day == 14) || (m == 8 && day == 15) ||
      (m == 11 && (day == 1 || day == 11)) || (m == 12 && day == 25)) {
    return true;
  }
  const Date easter = easter_sunday(d.year());
  return d == easter + 1 || d == easter + 39 || d == easter + 50;
}

}  // namespace firerisk
