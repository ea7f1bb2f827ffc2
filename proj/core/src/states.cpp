#include "orderflow/states.hpp"

#include "orderflow/errors.hpp"

namespace orderflow {

namespace {

constexpr std::array<std::string_view, kStateCount> kCodes = {
    "AB", "AA", "DB", "DA", "FB", "FA", "EB", "EA", "CB", "CA",
};

constexpr std::array<std::string_view, kStateCount> kEventNames = {
    "ADD-BID",     "ADD-ASK",     "DELETE-BID",  "DELETE-ASK", "FILL-BID",
    "FILL-ASK",    "EXECUTE-BID", "EXECUTE-ASK", "CANCEL-BID", "CANCEL-ASK",
};

}  // namespace

std::string_view state_code(OrderState s) { return kCodes[state_index(s)]; }

std::string_view state_event_name(OrderState s) { return kEventNames[state_index(s)]; }

std::optional<OrderState> state_from_code(std::string_view code) {
  for (OrderState s : kAllStates) {
    if (kCodes[state_index(s)] == code) return s;
  }
  return std::nullopt;
}

std::optional<OrderState> state_from_event_name(std::string_view name) {
  for (OrderState s : kAllStates) {
    if (kEventNames[state_index(s)] == name) return s;
  }
  return std::nullopt;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_config: return "invalid_config";
    case Errc::io_failure: return "io_failure";
    case Errc::missing_column: return "missing_column";
    case Errc::bad_row: return "bad_row";
    case Errc::unknown_event_type: return "unknown_event_type";
    case Errc::invalid_matrix_file: return "invalid_matrix_file";
    case Errc::non_positive_low: return "non_positive_low";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::sequence_too_short: return "sequence_too_short";
    case Errc::state_set_mismatch: return "state_set_mismatch";
    case Errc::empty_counts: return "empty_counts";
    case Errc::not_row_stochastic: return "not_row_stochastic";
    case Errc::not_ergodic: return "not_ergodic";
    case Errc::singular_system: return "singular_system";
    case Errc::no_convergence: return "no_convergence";
    case Errc::zero_stationary_mass: return "zero_stationary_mass";
    case Errc::invalid_distribution: return "invalid_distribution";
    case Errc::invalid_length: return "invalid_length";
    case Errc::insufficient_occurrences: return "insufficient_occurrences";
    case Errc::empty_sector: return "empty_sector";
  }
  return "unknown";
}

}  // namespace orderflow
