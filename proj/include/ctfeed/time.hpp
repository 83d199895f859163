#pragma once

// Second-resolution wall-clock instants and durations as they appear in
// gameplay logs: `YYYY-MM-DD HH:MM:SS` and `HH:MM:SS`.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ctfeed {

using seconds = std::chrono::seconds;
using instant = std::chrono::sys_seconds;

namespace detail {

inline std::optional<int> parse_digits(std::string_view s) {
  if (s.empty()) return std::nullopt;
  for (char c : s)
    if (c < '0' || c > '9') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses `YYYY-MM-DD HH:MM:SS` (24-hour, zero-padded, no zone).
inline std::optional<instant> parse_instant(std::string_view s) {
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' || s[16] != ':')
    return std::nullopt;
  auto y = detail::parse_digits(s.substr(0, 4));
  auto mo = detail::parse_digits(s.substr(5, 2));
  auto d = detail::parse_digits(s.substr(8, 2));
  auto h = detail::parse_digits(s.substr(11, 2));
  auto mi = detail::parse_digits(s.substr(14, 2));
  auto se = detail::parse_digits(s.substr(17, 2));
  if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
  if (*h > 23 || *mi > 59 || *se > 59) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{*y},
                                  std::chrono::month{static_cast<unsigned>(*mo)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd} + std::chrono::hours{*h} + std::chrono::minutes{*mi} +
         seconds{*se};
}

inline std::string format_instant(instant t) {
  auto days = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{days};
  std::chrono::hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

/// Parses `HH:MM:SS`; hours may exceed two digits, minutes and seconds may not.
inline std::optional<seconds> parse_duration(std::string_view s) {
  auto c1 = s.find(':');
  if (c1 == std::string_view::npos || c1 < 2) return std::nullopt;
  auto rest = s.substr(c1 + 1);
  if (rest.size() != 5 || rest[2] != ':') return std::nullopt;
  auto h = detail::parse_digits(s.substr(0, c1));
  auto m = detail::parse_digits(rest.substr(0, 2));
  auto sec = detail::parse_digits(rest.substr(3, 2));
  if (!h || !m || !sec || *m > 59 || *sec > 59) return std::nullopt;
  return seconds{std::int64_t{*h} * 3600 + *m * 60 + *sec};
}

inline std::string format_duration(seconds d) {
  auto total = d.count();
  bool negative = total < 0;
  if (negative) total = -total;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02lld:%02lld:%02lld", negative ? "-" : "",
                static_cast<long long>(total / 3600), static_cast<long long>(total / 60 % 60),
                static_cast<long long>(total % 60));
  return buf;
}

}  // namespace ctfeed
