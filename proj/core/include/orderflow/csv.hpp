#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "orderflow/errors.hpp"
#include "orderflow/events.hpp"

namespace orderflow {

// A row that failed to decode. Recoverable: the reader keeps going.
struct RowError {
  std::size_t line = 0;  // 1-based, header included
  Errc code = Errc::bad_row;
  std::string message;
};

using DecodedRow = std::variant<OrderEvent, RowError>;

// Which physical column holds each logical field, derived from the header.
struct ColumnSchema {
  enum Field { kDate, kTimestamp, kOrderId, kEventType, kTicker, kPrice, kQuantity, kExchange };
  std::array<std::size_t, 8> index{};

  // Throws Error{missing_column} when a required column is absent and
  // Error{bad_row} on duplicate or unrecognised header cells.
  static ColumnSchema from_header(std::string_view header_line);
};

// Streaming decoder for the event-log CSV. Reads one line at a time; peak
// memory does not depend on input size. Rows with a timestamp outside
// [04:00:00.000, 20:00:00.000] are rejected as row errors.
class EventReader {
 public:
  // Consumes the header immediately; throws Error on a bad header.
  explicit EventReader(std::istream& in);

  // nullopt at end of input; otherwise one event or one row error.
  std::optional<DecodedRow> next();

  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  ColumnSchema schema_;
  std::string line_buf_;
  std::size_t line_ = 0;
};

// Drives an EventReader over the whole stream.
void decode_stream(std::istream& in, const std::function<void(const OrderEvent&)>& on_event,
                   const std::function<void(const RowError&)>& on_error);

// Encoder for the same schema; numbers are written in shortest round-trip
// form so decode(encode(x)) == x field for field.
void write_events_csv(std::ostream& out, std::span<const OrderEvent> events);

std::string format_double(double value);

}  // namespace orderflow
