#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "orderflow/events.hpp"
#include "orderflow/time.hpp"

namespace orderflow {

// Filters applied while accumulating. Empty ticker set / absent window mean
// "keep everything".
struct IngestFilter {
  std::set<std::string> tickers;
  std::optional<DateInterval> dates;
  std::optional<TimeWindow> session;

  bool accepts(const OrderEvent& ev) const {
    if (!tickers.empty() && !tickers.contains(ev.ticker)) return false;
    if (dates && !dates->contains(ev.date)) return false;
    if (session && !session->contains(ev.timestamp)) return false;
    return true;
  }
};

// Builds per-(ticker, day) state sequences in file order, one event at a time.
class SequenceExtractor {
 public:
  SequenceExtractor() = default;
  explicit SequenceExtractor(IngestFilter filter) : filter_(std::move(filter)) {}

  void add(const OrderEvent& ev);

  const std::map<SeriesKey, StateSequence>& sequences() const { return sequences_; }
  std::map<SeriesKey, StateSequence> take() { return std::move(sequences_); }

 private:
  IngestFilter filter_;
  std::map<SeriesKey, StateSequence> sequences_;
};

// Tracks per-(ticker, day) high/low over priced rows (price > 0).
class DailyStatsAccumulator {
 public:
  DailyStatsAccumulator() = default;
  explicit DailyStatsAccumulator(IngestFilter filter) : filter_(std::move(filter)) {}

  void add(const OrderEvent& ev);

  const std::map<SeriesKey, DailyPriceStats>& stats() const { return stats_; }
  std::map<SeriesKey, DailyPriceStats> take() { return std::move(stats_); }

 private:
  IngestFilter filter_;
  std::map<SeriesKey, DailyPriceStats> stats_;
};

// One-shot forms over a decoded event list.
std::map<SeriesKey, StateSequence> extract_sequences(std::span<const OrderEvent> events,
                                                     const std::set<std::string>& tickers,
                                                     const std::set<Date>& dates);

std::map<SeriesKey, DailyPriceStats> daily_price_stats(std::span<const OrderEvent> events);

}  // namespace orderflow
