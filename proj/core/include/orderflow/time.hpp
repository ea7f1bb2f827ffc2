#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace orderflow {

// Calendar date, validated against the Gregorian calendar.
class Date {
 public:
  Date() = default;
  Date(int year, unsigned month, unsigned day);

  int year() const { return packed_ / 10000; }
  unsigned month() const { return static_cast<unsigned>((packed_ / 100) % 100); }
  unsigned day() const { return static_cast<unsigned>(packed_ % 100); }

  // "YYYY-MM-DD"
  std::string to_string() const;
  static std::optional<Date> parse(std::string_view text);

  Date next_day() const;

  auto operator<=>(const Date&) const = default;

 private:
  std::int32_t packed_ = 0;  // year * 10000 + month * 100 + day
};

// Time of day at millisecond resolution.
class TimeOfDay {
 public:
  TimeOfDay() = default;
  explicit TimeOfDay(std::uint32_t millis_since_midnight) : millis_(millis_since_midnight) {}

  std::uint32_t millis() const { return millis_; }

  // "HH:MM:SS.mmm"
  std::string to_string() const;
  // Accepts "H:MM:SS.mmm" and "HH:MM:SS.mmm".
  static std::optional<TimeOfDay> parse(std::string_view text);

  auto operator<=>(const TimeOfDay&) const = default;

 private:
  std::uint32_t millis_ = 0;
};

inline constexpr std::uint32_t kMillisPerDay = 24u * 3600u * 1000u;

// Trading-session bounds of the feed: 04:00:00.000 through 20:00:00.000.
inline constexpr std::uint32_t kSessionOpenMs = 4u * 3600u * 1000u;
inline constexpr std::uint32_t kSessionCloseMs = 20u * 3600u * 1000u;

// Regular market hours, 09:30:00.000 through 16:00:00.000.
inline constexpr std::uint32_t kRegularOpenMs = (9u * 3600u + 30u * 60u) * 1000u;
inline constexpr std::uint32_t kRegularCloseMs = 16u * 3600u * 1000u;

struct DateInterval {
  Date from;
  Date to;  // inclusive

  bool contains(const Date& d) const { return from <= d && d <= to; }
};

struct TimeWindow {
  std::uint32_t min_ms = kSessionOpenMs;
  std::uint32_t max_ms = kSessionCloseMs;  // inclusive

  bool contains(TimeOfDay t) const { return t.millis() >= min_ms && t.millis() <= max_ms; }
};

}  // namespace orderflow
