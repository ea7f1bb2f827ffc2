#include "orderflow/ingest.hpp"

namespace orderflow {

void SequenceExtractor::add(const OrderEvent& ev) {
  if (!filter_.accepts(ev)) return;
  SeriesKey key{ev.ticker, ev.date};
  auto it = sequences_.find(key);
  if (it == sequences_.end()) {
    it = sequences_.emplace(key, StateSequence{ev.ticker, ev.date, {}}).first;
  }
  it->second.states.push_back(ev.event_type);
}

void DailyStatsAccumulator::add(const OrderEvent& ev) {
  if (ev.price <= 0.0) return;  // placeholder prices carry no level information
  if (!filter_.accepts(ev)) return;
  SeriesKey key{ev.ticker, ev.date};
  auto it = stats_.find(key);
  if (it == stats_.end()) {
    stats_.emplace(key, DailyPriceStats{ev.ticker, ev.date, ev.price, ev.price, ev.price, 1});
    return;
  }
  DailyPriceStats& s = it->second;
  s.high = std::max(s.high, ev.price);
  s.low = std::min(s.low, ev.price);
  ++s.n_priced_rows;
}

std::map<SeriesKey, StateSequence> extract_sequences(std::span<const OrderEvent> events,
                                                     const std::set<std::string>& tickers,
                                                     const std::set<Date>& dates) {
  IngestFilter filter;
  filter.tickers = tickers;
  SequenceExtractor extractor(filter);
  for (const OrderEvent& ev : events) {
    if (!dates.empty() && !dates.contains(ev.date)) continue;
    extractor.add(ev);
  }
  return extractor.take();
}

std::map<SeriesKey, DailyPriceStats> daily_price_stats(std::span<const OrderEvent> events) {
  DailyStatsAccumulator acc;
  for (const OrderEvent& ev : events) acc.add(ev);
  return acc.take();
}

}  // namespace orderflow
