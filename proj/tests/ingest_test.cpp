#include <doctest.h>

#include <istream>
#include <random>
#include <sstream>

#include "alloc_meter.hpp"
#include "oracles.hpp"
#include "orderflow/csv.hpp"
#include "orderflow/ingest.hpp"

using namespace orderflow;

namespace {

OrderEvent make_event(const char* ticker, OrderState state, double price = 1.0,
                      Date date = Date(2018, 11, 6), std::uint32_t ms = kSessionOpenMs) {
  OrderEvent ev;
  ev.date = date;
  ev.timestamp = TimeOfDay(ms);
  ev.order_id = 1;
  ev.event_type = state;
  ev.ticker = ticker;
  ev.price = price;
  ev.quantity = 100;
  ev.exchange = "NASDAQ";
  return ev;
}

}  // namespace

TEST_SUITE_BEGIN("ingest");

TEST_CASE("extract keeps only requested tickers, in file order") {
  std::vector<OrderEvent> events = {
      make_event("AAPL", OrderState::kAddBid),
      make_event("AAPL", OrderState::kAddAsk),
      make_event("XLF", OrderState::kAddBid),
  };
  auto seqs = extract_sequences(events, {"AAPL"}, {});
  REQUIRE(seqs.size() == 1);
  const StateSequence& seq = seqs.begin()->second;
  CHECK(seq.ticker == "AAPL");
  CHECK(seq.states == std::vector<OrderState>{OrderState::kAddBid, OrderState::kAddAsk});
}

TEST_CASE("no matching rows yields an empty map") {
  std::vector<OrderEvent> events = {make_event("AAPL", OrderState::kAddBid)};
  CHECK(extract_sequences(events, {"MSFT"}, {}).empty());
}

TEST_CASE("extraction preserves order against an independent filter") {
  std::mt19937_64 rng(99);
  std::vector<OrderEvent> events;
  std::vector<OrderState> expected;
  for (int i = 0; i < 20000; ++i) {
    OrderState s = kAllStates[rng() % kStateCount];
    const char* ticker = (rng() % 3 == 0) ? "AAPL" : "MSFT";
    events.push_back(make_event(ticker, s));
    if (std::string_view(ticker) == "AAPL") expected.push_back(s);
  }
  auto seqs = extract_sequences(events, {"AAPL"}, {});
  REQUIRE(seqs.size() == 1);
  CHECK(seqs.begin()->second.states == expected);
}

TEST_CASE("daily stats ignore placeholder prices") {
  std::vector<OrderEvent> events = {
      make_event("AAPL", OrderState::kAddBid, 164.99),
      make_event("AAPL", OrderState::kAddAsk, 194.99),
      make_event("AAPL", OrderState::kDeleteBid, 0.0),
  };
  auto stats = daily_price_stats(events);
  REQUIRE(stats.size() == 1);
  const DailyPriceStats& s = stats.begin()->second;
  CHECK(s.high == doctest::Approx(194.99));
  CHECK(s.low == doctest::Approx(164.99));
  CHECK(s.first_price == doctest::Approx(164.99));
  CHECK(s.n_priced_rows == 2);
}

TEST_CASE("single priced row gives a degenerate range") {
  std::vector<OrderEvent> events = {make_event("AAPL", OrderState::kAddBid, 100.0)};
  auto stats = daily_price_stats(events);
  REQUIRE(stats.size() == 1);
  CHECK(stats.begin()->second.high == 100.0);
  CHECK(stats.begin()->second.low == 100.0);
}

TEST_CASE("all-placeholder days are absent from the stats map") {
  std::vector<OrderEvent> events = {make_event("AAPL", OrderState::kDeleteBid, 0.0)};
  CHECK(daily_price_stats(events).empty());
}

TEST_CASE("randomized stats match a brute-force scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> price(1.0, 500.0);
  std::vector<OrderEvent> events;
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 10000; ++i) {
    double p = price(rng);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
    events.push_back(make_event("NEE", OrderState::kAddBid, p));
  }
  auto stats = daily_price_stats(events);
  REQUIRE(stats.size() == 1);
  CHECK(stats.begin()->second.low == lo);
  CHECK(stats.begin()->second.high == hi);
  CHECK(stats.begin()->second.n_priced_rows == 10000);
}

TEST_CASE("session filter restricts to regular hours when asked") {
  IngestFilter filter;
  filter.session = TimeWindow{kRegularOpenMs, kRegularCloseMs};
  SequenceExtractor extractor(filter);
  extractor.add(make_event("AAPL", OrderState::kAddBid, 1.0, Date(2018, 11, 6), kSessionOpenMs));
  extractor.add(make_event("AAPL", OrderState::kAddAsk, 1.0, Date(2018, 11, 6), kRegularOpenMs));
  auto seqs = extractor.take();
  REQUIRE(seqs.size() == 1);
  CHECK(seqs.begin()->second.states == std::vector<OrderState>{OrderState::kAddAsk});
}

TEST_CASE("streaming decode of a large feed keeps peak memory flat") {
  constexpr std::size_t kRows = 1'000'000;
  oracles::SyntheticFeed feed(kRows);
  std::istream in(&feed);

  long long before = allocmeter::live_bytes.load();
  allocmeter::reset_peak();

  std::size_t decoded = 0;
  decode_stream(
      in, [&](const OrderEvent&) { ++decoded; },
      [&](const RowError&) { FAIL("synthetic feed must decode cleanly"); });

  long long peak_growth = allocmeter::peak_bytes.load() - before;
  CHECK(decoded == kRows);
  CHECK(feed.bytes_produced() > 50u * 1024 * 1024);  // the virtual file is tens of MB
  CHECK(peak_growth < 1'000'000);                    // the decoder never holds more than ~1 MB
}

TEST_SUITE_END();
