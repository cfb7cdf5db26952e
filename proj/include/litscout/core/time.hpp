#pragma once

// Calendar date and RFC 3339 timestamp value types. Only the subset of
// ISO-8601 needed by the wire formats is accepted.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "litscout/core/error.hpp"

namespace litscout {

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2 ? 1 : 0;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2 ? 1 : 0), m, d};
}

constexpr bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : table[m - 1];
}

inline bool read_digits(std::string_view s, std::size_t pos, std::size_t n,
                        int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// A calendar date (no time zone), rendered as YYYY-MM-DD.
class Date {
 public:
  Date(int year, unsigned month, unsigned day)
      : year_(year), month_(month), day_(day) {
    if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 ||
        day > detail::days_in_month(year, month)) {
      throw InvalidValue("invalid calendar date");
    }
  }

  static Date parse(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !detail::read_digits(text, 0, 4, y) ||
        !detail::read_digits(text, 5, 2, m) ||
        !detail::read_digits(text, 8, 2, d)) {
      throw InvalidValue("expected YYYY-MM-DD date, got '" + std::string(text) +
                         "'");
    }
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  }

  int year() const noexcept { return year_; }
  unsigned month() const noexcept { return month_; }
  unsigned day() const noexcept { return day_; }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_);
    return buf;
  }

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  int year_;
  unsigned month_;
  unsigned day_;
};

/// An instant with the UTC offset it was written in. Rendered as RFC 3339
/// (seconds precision): 2025-06-01T09:00:00Z or 2025-06-01T17:00:00+08:00.
class Timestamp {
 public:
  using Seconds = std::chrono::sys_seconds;

  Timestamp() = default;
  explicit Timestamp(Seconds utc, int offset_minutes = 0)
      : utc_(utc), offset_minutes_(offset_minutes) {
    if (offset_minutes < -18 * 60 || offset_minutes > 18 * 60) {
      throw InvalidValue("UTC offset out of range");
    }
  }

  static Timestamp now() {
    return Timestamp(
        std::chrono::time_point_cast<std::chrono::seconds>(
            std::chrono::system_clock::now()));
  }

  static Timestamp parse(std::string_view text) {
    auto fail = [&]() -> InvalidValue {
      return InvalidValue("expected RFC 3339 timestamp, got '" +
                          std::string(text) + "'");
    };
    int y, mo, d, h, mi, s;
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':' ||
        !detail::read_digits(text, 0, 4, y) ||
        !detail::read_digits(text, 5, 2, mo) ||
        !detail::read_digits(text, 8, 2, d) ||
        !detail::read_digits(text, 11, 2, h) ||
        !detail::read_digits(text, 14, 2, mi) ||
        !detail::read_digits(text, 17, 2, s)) {
      throw fail();
    }
    std::size_t pos = 19;
    // Fractional seconds are accepted and truncated.
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      const std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start) throw fail();
    }
    int offset = 0;
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
      ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      int oh, om;
      if (pos + 6 != text.size() || text[pos + 3] != ':' ||
          !detail::read_digits(text, pos + 1, 2, oh) ||
          !detail::read_digits(text, pos + 4, 2, om) || om > 59) {
        throw fail();
      }
      offset = (oh * 60 + om) * (text[pos] == '-' ? -1 : 1);
      pos += 6;
    } else {
      throw fail();
    }
    if (pos != text.size() || mo < 1 || mo > 12 || d < 1 ||
        static_cast<unsigned>(d) >
            detail::days_in_month(y, static_cast<unsigned>(mo)) ||
        h > 23 || mi > 59 || s > 60) {
      throw fail();
    }
    const std::int64_t days = detail::days_from_civil(
        y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    const std::int64_t local = days * 86400 + h * 3600 + mi * 60 + s;
    return Timestamp(Seconds(std::chrono::seconds(local - offset * 60)), offset);
  }

  Seconds utc() const noexcept { return utc_; }
  int offset_minutes() const noexcept { return offset_minutes_; }

  std::string to_string() const {
    const std::int64_t local =
        utc_.time_since_epoch().count() + offset_minutes_ * 60;
    std::int64_t days = local / 86400;
    std::int64_t secs = local % 86400;
    if (secs < 0) {
      secs += 86400;
      days -= 1;
    }
    const auto c = detail::civil_from_days(days);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(c.year), c.month, c.day,
                  static_cast<long long>(secs / 3600),
                  static_cast<long long>(secs / 60 % 60),
                  static_cast<long long>(secs % 60));
    std::string out = buf;
    if (offset_minutes_ == 0) {
      out += 'Z';
    } else {
      const int a = offset_minutes_ < 0 ? -offset_minutes_ : offset_minutes_;
      std::snprintf(buf, sizeof buf, "%c%02d:%02d",
                    offset_minutes_ < 0 ? '-' : '+', a / 60, a % 60);
      out += buf;
    }
    return out;
  }

  friend bool operator==(const Timestamp&, const Timestamp&) = default;

 private:
  Seconds utc_{};
  int offset_minutes_ = 0;
};

}  // namespace litscout
