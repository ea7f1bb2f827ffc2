#include "orderflow/simulate.hpp"

#include <cmath>
#include <random>

#include "orderflow/errors.hpp"

namespace orderflow {

namespace {

// 53-bit uniform in [0, 1); fully determined by the engine's output stream.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sample_index(std::span<const double> weights, double u) {
  double cum = 0.0;
  std::size_t last_positive = 0;
  bool any = false;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    cum += weights[j];
    last_positive = j;
    any = true;
    if (u < cum) return j;
  }
  if (!any) throw Error(Errc::invalid_distribution, "all weights are zero");
  return last_positive;  // u landed in the rounding slack past the last step
}

}  // namespace

StateSequence simulate_sequence(const SimulationSpec& spec) {
  spec.matrix.validate();
  const std::size_t r = spec.matrix.order();
  if (spec.length < 1) throw Error(Errc::invalid_length, "length must be at least 1");
  if (spec.initial.size() != r) {
    throw Error(Errc::invalid_distribution, "initial distribution size does not match chain");
  }
  double sum = 0.0;
  for (double v : spec.initial) {
    if (v < 0.0) throw Error(Errc::invalid_distribution, "negative initial probability");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw Error(Errc::invalid_distribution, "initial distribution sums to " + std::to_string(sum));
  }

  std::mt19937_64 rng(spec.seed);
  StateSequence seq;
  seq.ticker = spec.ticker;
  seq.date = spec.date;
  seq.states.reserve(spec.length);

  std::size_t current = sample_index(spec.initial, next_unit(rng));
  seq.states.push_back(spec.matrix.states[current]);
  for (std::uint64_t t = 1; t < spec.length; ++t) {
    std::span<const double> row(&spec.matrix.p(current, 0), r);
    current = sample_index(row, next_unit(rng));
    seq.states.push_back(spec.matrix.states[current]);
  }
  return seq;
}

std::array<double, kStateCount> empirical_state_frequencies(const StateSequence& seq) {
  std::array<std::uint64_t, kStateCount> hits{};
  for (OrderState s : seq.states) ++hits[state_index(s)];
  std::array<double, kStateCount> out{};
  if (seq.states.empty()) return out;
  for (std::size_t i = 0; i < kStateCount; ++i) {
    out[i] = static_cast<double>(hits[i]) / static_cast<double>(seq.states.size());
  }
  return out;
}

std::vector<double> project_frequencies(const std::array<double, kStateCount>& freqs,
                                        std::span<const OrderState> states) {
  std::vector<double> out;
  out.reserve(states.size());
  for (OrderState s : states) out.push_back(freqs[state_index(s)]);
  return out;
}

std::array<std::optional<double>, kStateCount> empirical_recurrence_times(
    const StateSequence& seq) {
  std::array<std::uint64_t, kStateCount> gaps{};
  std::array<std::uint64_t, kStateCount> returns{};
  std::array<std::int64_t, kStateCount> last;
  last.fill(-1);
  for (std::size_t t = 0; t < seq.states.size(); ++t) {
    std::size_t i = state_index(seq.states[t]);
    if (last[i] >= 0) {
      gaps[i] += t - static_cast<std::size_t>(last[i]);
      ++returns[i];
    }
    last[i] = static_cast<std::int64_t>(t);
  }
  std::array<std::optional<double>, kStateCount> out;
  for (std::size_t i = 0; i < kStateCount; ++i) {
    if (returns[i] > 0) {
      out[i] = static_cast<double>(gaps[i]) / static_cast<double>(returns[i]);
    }
  }
  return out;
}

std::vector<OrderEvent> sequence_to_events(const StateSequence& seq, const PriceModel& prices,
                                           std::uint64_t first_order_id) {
  if (seq.states.empty() || kSessionOpenMs + seq.states.size() - 1 > kSessionCloseMs) {
    throw Error(Errc::invalid_length,
                "sequence of length " + std::to_string(seq.states.size()) +
                    " does not fit one trading session");
  }
  std::vector<OrderEvent> events;
  events.reserve(seq.states.size());
  for (std::size_t t = 0; t < seq.states.size(); ++t) {
    OrderState s = seq.states[t];
    OrderEvent ev;
    ev.date = seq.date;
    ev.timestamp = TimeOfDay(kSessionOpenMs + static_cast<std::uint32_t>(t));
    ev.order_id = first_order_id + t;
    ev.event_type = s;
    ev.ticker = seq.ticker;
    switch (s) {
      case OrderState::kAddBid:
      case OrderState::kExecuteBid:
      case OrderState::kFillBid:
        ev.price = prices.bid;
        break;
      case OrderState::kAddAsk:
      case OrderState::kExecuteAsk:
      case OrderState::kFillAsk:
        ev.price = prices.ask;
        break;
      default:
        ev.price = 0.0;  // delete/cancel placeholder
    }
    ev.quantity = 100;
    ev.exchange = "NASDAQ";
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace orderflow
