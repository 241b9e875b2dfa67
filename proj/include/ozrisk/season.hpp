#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "ozrisk/errors.hpp"

namespace ozrisk {

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

/// Parse an ISO calendar date "YYYY-MM-DD".
inline std::chrono::year_month_day parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::parse_int(s.substr(0, 4), y) ||
      !detail::parse_int(s.substr(5, 2), m) || !detail::parse_int(s.substr(8, 2), d))
    throw ConfigError("malformed date '" + std::string(s) + "' (expected YYYY-MM-DD)");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ConfigError("invalid calendar date '" + std::string(s) + "'");
  return ymd;
}

inline std::string format_date(std::chrono::year_month_day ymd) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

/// Inclusive range of simulated calendar days.
class Season {
 public:
  Season(std::chrono::year_month_day start, std::chrono::year_month_day end)
      : start_(start), end_(end) {
    const auto days = (std::chrono::sys_days{end} - std::chrono::sys_days{start}).count() + 1;
    if (days <= 0) throw ConfigError("season end precedes its start");
    n_days_ = static_cast<std::uint32_t>(days);
  }

  /// "YYYY-MM-DD:YYYY-MM-DD"
  static Season parse(std::string_view range) {
    const auto colon = range.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("season must be START:END, got '" + std::string(range) + "'");
    return {parse_date(range.substr(0, colon)), parse_date(range.substr(colon + 1))};
  }

  /// March 1 through November 30 of `year`.
  static Season ozone_season(int year) {
    using namespace std::chrono;
    return {year_month_day{std::chrono::year{year}, March, day{1}},
            year_month_day{std::chrono::year{year}, November, day{30}}};
  }

  std::chrono::year_month_day start() const noexcept { return start_; }
  std::chrono::year_month_day end() const noexcept { return end_; }
  std::uint32_t n_days() const noexcept { return n_days_; }
  std::uint32_t n_hours() const noexcept { return n_days_ * 24u; }
  double n_minutes() const noexcept { return n_days_ * 1440.0; }

  std::chrono::year_month_day date_of(std::uint32_t day_index) const {
    return std::chrono::sys_days{start_} + std::chrono::days{day_index};
  }

  /// Local timestamp "YYYY-MM-DDTHH:00" of a season hour.
  std::string timestamp(std::uint32_t hour_index) const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02u:00", hour_index % 24u);
    return format_date(date_of(hour_index / 24u)) + buf;
  }

  std::string to_string() const { return format_date(start_) + ":" + format_date(end_); }

  friend bool operator==(const Season& a, const Season& b) {
    return a.start_ == b.start_ && a.end_ == b.end_;
  }

 private:
  std::chrono::year_month_day start_;
  std::chrono::year_month_day end_;
  std::uint32_t n_days_ = 0;
};

}  // namespace ozrisk
