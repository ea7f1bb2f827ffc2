#include <doctest.h>

#include "orderflow/states.hpp"
#include "orderflow/time.hpp"

using namespace orderflow;

TEST_SUITE_BEGIN("states");

TEST_CASE("canonical index order is AB AA DB DA FB FA EB EA CB CA") {
  CHECK(state_index(OrderState::kAddBid) == 0);
  CHECK(state_index(OrderState::kAddAsk) == 1);
  CHECK(state_index(OrderState::kDeleteBid) == 2);
  CHECK(state_index(OrderState::kDeleteAsk) == 3);
  CHECK(state_index(OrderState::kFillBid) == 4);
  CHECK(state_index(OrderState::kFillAsk) == 5);
  CHECK(state_index(OrderState::kExecuteBid) == 6);
  CHECK(state_index(OrderState::kExecuteAsk) == 7);
  CHECK(state_index(OrderState::kCancelBid) == 8);
  CHECK(state_index(OrderState::kCancelAsk) == 9);
}

TEST_CASE("codes and event names are bijective over the alphabet") {
  for (OrderState s : kAllStates) {
    CHECK(state_from_code(state_code(s)) == s);
    CHECK(state_from_event_name(state_event_name(s)) == s);
  }
  CHECK(state_code(OrderState::kAddBid) == "AB");
  CHECK(state_event_name(OrderState::kCancelAsk) == "CANCEL-ASK");
  CHECK_FALSE(state_from_code("ZZ").has_value());
  CHECK_FALSE(state_from_event_name("MODIFY-BID").has_value());
}

TEST_CASE("date parse/format round trip and validation") {
  auto d = Date::parse("2018-11-06");
  REQUIRE(d.has_value());
  CHECK(d->year() == 2018);
  CHECK(d->month() == 11);
  CHECK(d->day() == 6);
  CHECK(d->to_string() == "2018-11-06");

  CHECK_FALSE(Date::parse("2018-13-01").has_value());
  CHECK_FALSE(Date::parse("2018-02-30").has_value());
  CHECK_FALSE(Date::parse("2018/11/06").has_value());
  CHECK(Date::parse("2020-02-29").has_value());  // leap day
  CHECK_FALSE(Date::parse("2019-02-29").has_value());

  CHECK(Date(2018, 12, 31).next_day() == Date(2019, 1, 1));
  CHECK(Date(2018, 11, 30).next_day() == Date(2018, 12, 1));
}

TEST_CASE("time of day accepts single and double digit hours") {
  auto t1 = TimeOfDay::parse("4:00:00.002");
  auto t2 = TimeOfDay::parse("04:00:00.002");
  REQUIRE(t1.has_value());
  REQUIRE(t2.has_value());
  CHECK(*t1 == *t2);
  CHECK(t1->millis() == 4u * 3600u * 1000u + 2u);
  CHECK(t1->to_string() == "04:00:00.002");

  CHECK_FALSE(TimeOfDay::parse("24:00:00.000").has_value());
  CHECK_FALSE(TimeOfDay::parse("9:61:00.000").has_value());
  CHECK_FALSE(TimeOfDay::parse("9:30:00").has_value());

  auto close = TimeOfDay::parse("20:00:00.000");
  REQUIRE(close.has_value());
  CHECK(close->millis() == kSessionCloseMs);
}

TEST_SUITE_END();
