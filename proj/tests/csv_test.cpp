#include <doctest.h>

#include <random>
#include <sstream>

#include "orderflow/csv.hpp"

using namespace orderflow;

namespace {

std::vector<OrderEvent> decode_all(const std::string& text, std::vector<RowError>* errors = nullptr) {
  std::istringstream in(text);
  std::vector<OrderEvent> events;
  decode_stream(
      in, [&](const OrderEvent& ev) { events.push_back(ev); },
      [&](const RowError& err) {
        if (errors != nullptr) errors->push_back(err);
      });
  return events;
}

const char* kHeader = "DATE,TIMESTAMP,ORDER ID.,EVENT TYPE,TICKER,PRICE,QUANTITY,EXCHANGE\n";

}  // namespace

TEST_SUITE_BEGIN("csv");

TEST_CASE("decodes the documented sample rows") {
  std::string text = std::string(kHeader) +
                     "2018-11-06,4:00:00.002,12011,ADD-BID,AAPL,164.99,100,NASDAQ\n"
                     "2018-11-06,9:30:00.156,89017,DELETE-BID,GOOGL,0,100,NASDAQ\n";
  auto events = decode_all(text);
  REQUIRE(events.size() == 2);

  CHECK(events[0].date == Date(2018, 11, 6));
  CHECK(events[0].event_type == OrderState::kAddBid);
  CHECK(events[0].ticker == "AAPL");
  CHECK(events[0].price == doctest::Approx(164.99));
  CHECK(events[0].quantity == 100);
  CHECK(events[0].order_id == 12011);
  CHECK(events[0].exchange == "NASDAQ");

  CHECK(events[1].event_type == OrderState::kDeleteBid);
  CHECK(events[1].price == 0.0);
}

TEST_CASE("header only yields an empty stream without error") {
  std::vector<RowError> errors;
  auto events = decode_all(kHeader, &errors);
  CHECK(events.empty());
  CHECK(errors.empty());
}

TEST_CASE("missing column is a schema error") {
  std::istringstream in("DATE,TIMESTAMP,ORDER ID.,EVENT TYPE,TICKER,PRICE,QUANTITY\n");
  try {
    EventReader reader(in);
    FAIL("expected missing_column");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_column);
    CHECK(std::string(e.what()).find("EXCHANGE") != std::string::npos);
  }
}

TEST_CASE("header matching is case-insensitive and accepts permuted columns") {
  std::string text =
      "ticker,date,timestamp,order id,event type,price,quantity,exchange\n"
      "AAPL,2018-11-06,4:00:00.002,7,ADD-ASK,194.99,500,NASDAQ\n";
  auto events = decode_all(text);
  REQUIRE(events.size() == 1);
  CHECK(events[0].ticker == "AAPL");
  CHECK(events[0].event_type == OrderState::kAddAsk);
  CHECK(events[0].quantity == 500);
}

TEST_CASE("malformed rows surface as per-row errors with line numbers") {
  std::string text = std::string(kHeader) +
                     "2018-11-06,4:00:00.002,1,ADD-BID,AAPL,164.99,100,NASDAQ\n"
                     "2018-11-06,4:00:00.003,2,ADD-BID,AAPL,not_a_price,100,NASDAQ\n"
                     "2018-11-06,4:00:00.004,3,MODIFY-BID,AAPL,1.0,100,NASDAQ\n"
                     "2018-11-06,4:00:00.005,4,ADD-ASK,AAPL,165.01,100,NASDAQ\n";
  std::vector<RowError> errors;
  auto events = decode_all(text, &errors);
  CHECK(events.size() == 2);  // bad rows are skipped, never silently merged
  REQUIRE(errors.size() == 2);
  CHECK(errors[0].line == 3);
  CHECK(errors[0].code == Errc::bad_row);
  CHECK(errors[1].line == 4);
  CHECK(errors[1].code == Errc::unknown_event_type);
}

TEST_CASE("timestamps outside the trading session are rejected") {
  std::string text = std::string(kHeader) +
                     "2018-11-06,3:59:59.999,1,ADD-BID,AAPL,1.0,1,NASDAQ\n"
                     "2018-11-06,4:00:00.000,2,ADD-BID,AAPL,1.0,1,NASDAQ\n"
                     "2018-11-06,20:00:00.000,3,ADD-BID,AAPL,1.0,1,NASDAQ\n"
                     "2018-11-06,20:00:00.001,4,ADD-BID,AAPL,1.0,1,NASDAQ\n";
  std::vector<RowError> errors;
  auto events = decode_all(text, &errors);
  CHECK(events.size() == 2);  // both boundaries are inclusive
  REQUIRE(errors.size() == 2);
  CHECK(errors[0].line == 2);
  CHECK(errors[1].line == 5);
}

TEST_CASE("CRLF input decodes identically to LF input") {
  std::string lf = std::string(kHeader) + "2018-11-06,4:00:00.002,1,FILL-ASK,XLF,67.5,300,NASDAQ\n";
  std::string crlf = lf;
  std::size_t pos = 0;
  while ((pos = crlf.find('\n', pos)) != std::string::npos) {
    crlf.replace(pos, 1, "\r\n");
    pos += 2;
  }
  CHECK(decode_all(lf) == decode_all(crlf));
}

TEST_CASE("encode/decode round trip is identity, field for field") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> state_dist(0, 9);
  std::uniform_int_distribution<std::uint32_t> ms_dist(kSessionOpenMs, kSessionCloseMs);
  std::uniform_real_distribution<double> price_dist(0.01, 5000.0);

  std::vector<OrderEvent> events;
  for (int i = 0; i < 500; ++i) {
    OrderEvent ev;
    ev.date = Date(2018, 11, 1 + static_cast<unsigned>(i % 28));
    ev.timestamp = TimeOfDay(ms_dist(rng));
    ev.order_id = rng();
    ev.event_type = kAllStates[static_cast<std::size_t>(state_dist(rng))];
    ev.ticker = (i % 2 == 0) ? "AAPL" : "JPM";
    ev.price = (i % 5 == 0) ? 0.0 : price_dist(rng);
    ev.quantity = rng() % 10000;
    ev.exchange = "NASDAQ";
    events.push_back(ev);
  }

  std::ostringstream out;
  write_events_csv(out, events);
  auto decoded = decode_all(out.str());
  CHECK(decoded == events);
}

TEST_SUITE_END();
