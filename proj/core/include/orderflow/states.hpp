#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace orderflow {

// The ten order-event states. The numeric values fix the canonical index
// order used by every matrix, table and heatmap in the toolkit; changing
// them would silently reorder all outputs.
enum class OrderState : unsigned char {
  kAddBid = 0,
  kAddAsk = 1,
  kDeleteBid = 2,
  kDeleteAsk = 3,
  kFillBid = 4,
  kFillAsk = 5,
  kExecuteBid = 6,
  kExecuteAsk = 7,
  kCancelBid = 8,
  kCancelAsk = 9,
};

inline constexpr std::size_t kStateCount = 10;

inline constexpr std::array<OrderState, kStateCount> kAllStates = {
    OrderState::kAddBid,     OrderState::kAddAsk,     OrderState::kDeleteBid,
    OrderState::kDeleteAsk,  OrderState::kFillBid,    OrderState::kFillAsk,
    OrderState::kExecuteBid, OrderState::kExecuteAsk, OrderState::kCancelBid,
    OrderState::kCancelAsk,
};

constexpr std::size_t state_index(OrderState s) { return static_cast<std::size_t>(s); }

// Two-letter code, e.g. "AB" for add-bid.
std::string_view state_code(OrderState s);

// Feed-file event string, e.g. "ADD-BID".
std::string_view state_event_name(OrderState s);

// Inverse lookups; nullopt for unrecognised text.
std::optional<OrderState> state_from_code(std::string_view code);
std::optional<OrderState> state_from_event_name(std::string_view name);

}  // namespace orderflow
