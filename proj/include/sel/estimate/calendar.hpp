#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "sel/core/error.hpp"

namespace sel::estimate {

/// Proleptic Gregorian calendar date stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

  static constexpr Date from_ymd(int year, unsigned month, unsigned day) noexcept {
    // civil-from-days inverse (H. Hinnant)
    const int y = year - (month <= 2 ? 1 : 0);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return Date(static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468);
  }

  /// Parses YYYY-MM-DD; rejects impossible dates.
  static Date parse(std::string_view text) {
    auto bad = [&] { fail(ErrorCode::ParseError, "invalid ISO-8601 date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad();
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [&](std::string_view part, auto& out) {
      const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
      if (ec != std::errc{} || p != part.data() + part.size()) bad();
    };
    num(text.substr(0, 4), y);
    num(text.substr(5, 2), m);
    num(text.substr(8, 2), d);
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) bad();
    return from_ymd(y, m, d);
  }

  constexpr std::int64_t days() const noexcept { return days_; }

  std::string to_string() const {
    const std::int64_t z = days_ + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    const auto y = static_cast<long long>(yoe) + era * 400 + (m <= 2 ? 1 : 0);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", y, m, d);
    return buf;
  }

  friend constexpr auto operator<=>(Date, Date) = default;
  friend constexpr std::int64_t operator-(Date a, Date b) noexcept { return a.days_ - b.days_; }
  constexpr Date plus_days(std::int64_t n) const noexcept { return Date(days_ + n); }

 private:
  static constexpr unsigned days_in_month(int y, unsigned m) noexcept {
    constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m == 2 && leap ? 29 : table[m - 1];
  }

  std::int64_t days_ = 0;
};

}  // namespace sel::estimate
