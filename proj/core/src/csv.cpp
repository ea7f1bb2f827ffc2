#include "orderflow/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <vector>

namespace orderflow {

namespace {

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on commas into at most `max_fields` pieces. Returns the field count.
std::size_t split_fields(std::string_view line, std::span<std::string_view> out) {
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view field =
        comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
    if (n < out.size()) out[n] = trim(field);
    ++n;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return n;
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_f64(std::string_view text, double& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Reads one line; handles LF and CRLF. Returns false at end of input.
bool get_line(std::istream& in, std::string& buf) {
  if (!std::getline(in, buf)) return false;
  if (!buf.empty() && buf.back() == '\r') buf.pop_back();
  return true;
}

constexpr std::array<std::string_view, 8> kColumnNames = {
    "DATE", "TIMESTAMP", "ORDER ID.", "EVENT TYPE", "TICKER", "PRICE", "QUANTITY", "EXCHANGE",
};

}  // namespace

ColumnSchema ColumnSchema::from_header(std::string_view header_line) {
  // Strip a UTF-8 BOM if present.
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);

  std::array<std::string_view, 64> raw;
  std::size_t n = split_fields(header_line, raw);
  if (n > raw.size()) throw Error(Errc::bad_row, "header has too many columns");

  ColumnSchema schema;
  std::array<bool, 8> seen{};
  for (std::size_t col = 0; col < n; ++col) {
    std::string cell = to_upper(raw[col]);
    // "ORDER ID" and "ORDER ID." are both accepted.
    if (cell == "ORDER ID") cell = "ORDER ID.";
    auto it = std::find(kColumnNames.begin(), kColumnNames.end(), cell);
    if (it == kColumnNames.end()) {
      throw Error(Errc::bad_row, "unrecognised header column '" + std::string(raw[col]) + "'");
    }
    std::size_t field = static_cast<std::size_t>(it - kColumnNames.begin());
    if (seen[field]) {
      throw Error(Errc::bad_row, "duplicate header column '" + std::string(raw[col]) + "'");
    }
    seen[field] = true;
    schema.index[field] = col;
  }
  for (std::size_t f = 0; f < 8; ++f) {
    if (!seen[f]) {
      throw Error(Errc::missing_column, "header lacks column '" + std::string(kColumnNames[f]) + "'");
    }
  }
  return schema;
}

EventReader::EventReader(std::istream& in) : in_(in) {
  if (!get_line(in_, line_buf_)) {
    throw Error(Errc::missing_column, "empty input, no header row");
  }
  ++line_;
  schema_ = ColumnSchema::from_header(line_buf_);
}

std::optional<DecodedRow> EventReader::next() {
  while (get_line(in_, line_buf_)) {
    ++line_;
    if (trim(line_buf_).empty()) continue;  // blank lines are not data

    std::array<std::string_view, 8> cell;
    std::array<std::string_view, 9> raw;
    std::size_t n = split_fields(line_buf_, raw);
    if (n != 8) {
      return RowError{line_, Errc::bad_row,
                      "expected 8 fields, got " + std::to_string(n)};
    }
    for (std::size_t f = 0; f < 8; ++f) cell[f] = raw[schema_.index[f]];

    auto date = Date::parse(cell[ColumnSchema::kDate]);
    if (!date) return RowError{line_, Errc::bad_row, "bad DATE field"};

    auto ts = TimeOfDay::parse(cell[ColumnSchema::kTimestamp]);
    if (!ts) return RowError{line_, Errc::bad_row, "bad TIMESTAMP field"};
    if (ts->millis() < kSessionOpenMs || ts->millis() > kSessionCloseMs) {
      return RowError{line_, Errc::bad_row,
                      "timestamp " + ts->to_string() + " outside session 04:00-20:00"};
    }

    OrderEvent ev;
    ev.date = *date;
    ev.timestamp = *ts;

    if (!parse_u64(cell[ColumnSchema::kOrderId], ev.order_id)) {
      return RowError{line_, Errc::bad_row, "bad ORDER ID. field"};
    }

    auto state = state_from_event_name(cell[ColumnSchema::kEventType]);
    if (!state) {
      return RowError{line_, Errc::unknown_event_type,
                      "unknown EVENT TYPE '" + std::string(cell[ColumnSchema::kEventType]) + "'"};
    }
    ev.event_type = *state;

    ev.ticker = std::string(cell[ColumnSchema::kTicker]);
    if (ev.ticker.empty()) return RowError{line_, Errc::bad_row, "empty TICKER field"};

    if (!parse_f64(cell[ColumnSchema::kPrice], ev.price) || ev.price < 0.0) {
      return RowError{line_, Errc::bad_row, "bad PRICE field"};
    }
    if (!parse_u64(cell[ColumnSchema::kQuantity], ev.quantity)) {
      return RowError{line_, Errc::bad_row, "bad QUANTITY field"};
    }
    ev.exchange = std::string(cell[ColumnSchema::kExchange]);
    return ev;
  }
  return std::nullopt;
}

void decode_stream(std::istream& in, const std::function<void(const OrderEvent&)>& on_event,
                   const std::function<void(const RowError&)>& on_error) {
  EventReader reader(in);
  while (auto row = reader.next()) {
    if (auto* ev = std::get_if<OrderEvent>(&*row)) {
      on_event(*ev);
    } else {
      on_error(std::get<RowError>(*row));
    }
  }
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_events_csv(std::ostream& out, std::span<const OrderEvent> events) {
  out << "DATE,TIMESTAMP,ORDER ID.,EVENT TYPE,TICKER,PRICE,QUANTITY,EXCHANGE\n";
  for (const OrderEvent& ev : events) {
    out << ev.date.to_string() << ',' << ev.timestamp.to_string() << ',' << ev.order_id << ','
        << state_event_name(ev.event_type) << ',' << ev.ticker << ',' << format_double(ev.price)
        << ',' << ev.quantity << ',' << ev.exchange << '\n';
  }
}

}  // namespace orderflow
