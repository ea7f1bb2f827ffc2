#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orderflow/events.hpp"
#include "orderflow/markov.hpp"

namespace orderflow {

// A reproducible draw from a chain: mt19937_64 keyed by `seed` and
// inverse-CDF sampling over each row (cumulative-sum walk, ties toward the
// lower index), so identical specs give identical sequences on every
// platform.
struct SimulationSpec {
  TransitionMatrix matrix;
  std::vector<double> initial;  // must sum to 1 within 1e-12
  std::uint64_t length = 0;     // >= 1
  std::uint64_t seed = 0;
  std::string ticker = "SIM";
  Date date = Date(2018, 11, 6);
};

StateSequence simulate_sequence(const SimulationSpec& spec);

// Occupancy fraction of each alphabet state; sums to 1 for non-empty input.
std::array<double, kStateCount> empirical_state_frequencies(const StateSequence& seq);

// Restricts alphabet-wide frequencies to a chain's state list.
std::vector<double> project_frequencies(const std::array<double, kStateCount>& freqs,
                                        std::span<const OrderState> states);

// Mean index gap between consecutive occurrences of each state; nullopt for
// states seen fewer than twice.
std::array<std::optional<double>, kStateCount> empirical_recurrence_times(
    const StateSequence& seq);

// Synthetic prices used when a sequence is rendered as an event log: add,
// execute and fill rows carry their side's price, delete and cancel rows
// carry the 0 placeholder.
struct PriceModel {
  double bid = 100.0;
  double ask = 101.0;
};

// Renders a sequence as event-log rows (one per millisecond from the session
// open) that round-trip through the CSV codec. Throws Error{invalid_length}
// when the sequence does not fit inside one trading session.
std::vector<OrderEvent> sequence_to_events(const StateSequence& seq, const PriceModel& prices,
                                           std::uint64_t first_order_id = 10001);

}  // namespace orderflow
