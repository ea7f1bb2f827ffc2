#include "orderflow/time.hpp"

#include <charconv>
#include <cstdio>

#include "orderflow/errors.hpp"

namespace orderflow {

namespace {

bool parse_uint(std::string_view text, unsigned& out) {
  if (text.empty()) return false;
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  out = value;
  return true;
}

unsigned days_in_month(int year, unsigned month) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29u : 28u;
  }
  return kDays[month - 1];
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 ||
      day > days_in_month(year, month)) {
    throw Error(Errc::bad_row, "invalid calendar date");
  }
  packed_ = year * 10000 + static_cast<int>(month) * 100 + static_cast<int>(day);
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
      !parse_uint(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  if (y < 1 || m < 1 || m > 12 || d < 1 || d > days_in_month(static_cast<int>(y), m)) {
    return std::nullopt;
  }
  Date date;
  date.packed_ = static_cast<std::int32_t>(y * 10000 + m * 100 + d);
  return date;
}

Date Date::next_day() const {
  unsigned d = day() + 1;
  unsigned m = month();
  int y = year();
  if (d > days_in_month(y, m)) {
    d = 1;
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  return Date(y, m, d);
}

std::string TimeOfDay::to_string() const {
  unsigned ms = millis_ % 1000;
  unsigned s = (millis_ / 1000) % 60;
  unsigned m = (millis_ / 60000) % 60;
  unsigned h = millis_ / 3600000;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02u:%02u:%02u.%03u", h, m, s, ms);
  return buf;
}

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view text) {
  // H:MM:SS.mmm or HH:MM:SS.mmm
  std::size_t first_colon = text.find(':');
  if (first_colon != 1 && first_colon != 2) return std::nullopt;
  std::size_t rest = first_colon + 1;
  if (text.size() != rest + 9 || text[rest + 2] != ':' || text[rest + 5] != '.') {
    return std::nullopt;
  }
  unsigned h = 0, m = 0, s = 0, ms = 0;
  if (!parse_uint(text.substr(0, first_colon), h) || !parse_uint(text.substr(rest, 2), m) ||
      !parse_uint(text.substr(rest + 3, 2), s) || !parse_uint(text.substr(rest + 6, 3), ms)) {
    return std::nullopt;
  }
  if (h > 23 || m > 59 || s > 59) return std::nullopt;
  return TimeOfDay(((h * 60 + m) * 60 + s) * 1000 + ms);
}

}  // namespace orderflow
