#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "orderflow/states.hpp"
#include "orderflow/time.hpp"

namespace orderflow {

// One decoded row of the exchange event log.
struct OrderEvent {
  Date date;
  TimeOfDay timestamp;
  std::uint64_t order_id = 0;
  OrderState event_type = OrderState::kAddBid;
  std::string ticker;
  double price = 0.0;  // 0 is a placeholder on delete/cancel rows, not a trade price
  std::uint64_t quantity = 0;
  std::string exchange;

  bool operator==(const OrderEvent&) const = default;
};

struct SeriesKey {
  std::string ticker;
  Date date;

  auto operator<=>(const SeriesKey&) const = default;
};

// The observed path of one stock on one day, in file order.
struct StateSequence {
  std::string ticker;
  Date date;
  std::vector<OrderState> states;

  std::size_t length() const { return states.size(); }
};

// Daily high/low over priced rows only (price > 0).
struct DailyPriceStats {
  std::string ticker;
  Date date;
  double high = 0.0;
  double low = 0.0;
  double first_price = 0.0;  // earliest priced row, the open proxy
  std::uint64_t n_priced_rows = 0;
};

}  // namespace orderflow
