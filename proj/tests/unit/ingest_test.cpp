#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "tradedfa/error.hpp"
#include "tradedfa/ingest.hpp"

using namespace tradedfa;

namespace {

TickSeries morning(std::initializer_list<std::int32_t> centis) {
  TickSeries t;
  t.dates = {"2003-01-02"};
  for (auto c : centis) t.ticks.push_back(Tick{0, Session::Morning, c});
  return t;
}

}  // namespace

TEST(ParseTicks, MapsFieldsDirectly) {
  const auto t = parse_ticks("date,time\n2003-01-02,09:30:01.25\n2003-01-02,09:30:04.25\n");
  ASSERT_EQ(t.ticks.size(), 2u);
  EXPECT_EQ(t.ticks[0].day, 0);
  EXPECT_EQ(t.ticks[0].session, Session::Morning);
  EXPECT_DOUBLE_EQ(t.ticks[0].seconds(), 1.25);
  EXPECT_DOUBLE_EQ(t.ticks[1].seconds(), 4.25);
  EXPECT_EQ(t.discarded_rows, 0u);
}

TEST(ParseTicks, DiscardsCallAuction) {
  const auto t = parse_ticks("date,time\n2003-01-02,09:25:00.00\n");
  EXPECT_TRUE(t.ticks.empty());
  EXPECT_EQ(t.discarded_rows, 1u);
}

TEST(ParseTicks, DiscardsNoonClosure) {
  const auto t = parse_ticks("date,time\n2003-01-02,12:00:00.00\n");
  EXPECT_TRUE(t.ticks.empty());
  EXPECT_EQ(t.discarded_rows, 1u);
}

TEST(ParseTicks, SessionBoundariesAreInclusive) {
  const auto t = parse_ticks(
      "date,time\n2003-01-02,09:30:00.00\n2003-01-02,11:30:00.00\n"
      "2003-01-02,13:00:00.00\n2003-01-02,15:00:00.00\n2003-01-02,15:00:00.01\n");
  ASSERT_EQ(t.ticks.size(), 4u);
  EXPECT_EQ(t.ticks[1].time_centis, kSessionLengthCentis);
  EXPECT_EQ(t.ticks[3].session, Session::Afternoon);
  EXPECT_EQ(t.close_prints, 1u);
  EXPECT_EQ(t.discarded_rows, 1u);
}

TEST(ParseTicks, AssignsDayIndexesInOrder) {
  const auto t = parse_ticks(
      "date,time\n2003-01-02,10:00:00.00\n2003-01-03,10:00:00.00\n2003-01-06,14:00:00.00\n");
  ASSERT_EQ(t.ticks.size(), 3u);
  EXPECT_EQ(t.ticks[2].day, 2);
  EXPECT_EQ(t.dates[2], "2003-01-06");
}

TEST(ParseTicks, MalformedRowReportsLine) {
  try {
    parse_ticks("date,time\n2003-01-02,09:30:01.25\n2003-01-02,9:30:02\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_ticks("date,time\n2003-01-02\n"), ParseError);
  EXPECT_THROW(parse_ticks("date,time\n2003-01-02,25:00:00.00\n"), ParseError);
  EXPECT_THROW(parse_ticks("time,date\n"), ParseError);
  EXPECT_THROW(parse_ticks(""), ParseError);
}

TEST(ParseTicks, BackwardTimeIsOrderingError) {
  try {
    parse_ticks("date,time\n2003-01-02,09:30:05.00\n2003-01-02,09:30:04.99\n");
    FAIL() << "expected OrderingError";
  } catch (const OrderingError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_ticks("date,time\n2003-01-02,13:30:00.00\n2003-01-02,10:00:00.00\n"),
               OrderingError);
  EXPECT_THROW(parse_ticks("date,time\n2003-01-02,10:00:00.00\n2003-01-03,10:00:00.00\n"
                           "2003-01-02,10:00:01.00\n"),
               OrderingError);
}

TEST(ParseTicks, EqualTimesAreAllowedBeforeCollapse) {
  const auto t = parse_ticks("date,time\n2003-01-02,09:30:05.00\n2003-01-02,09:30:05.00\n");
  EXPECT_EQ(t.ticks.size(), 2u);
}

TEST(ParseTicks, AcceptsCrLf) {
  const auto t = parse_ticks("date,time\r\n2003-01-02,09:30:01.25\r\n");
  ASSERT_EQ(t.ticks.size(), 1u);
  EXPECT_EQ(t.ticks[0].time_centis, 125);
}

TEST(SerializeTicks, RoundTripIsByteIdentical) {
  const std::string text =
      "date,time\n2003-01-02,09:30:00.00\n2003-01-02,09:30:00.00\n2003-01-02,11:29:59.99\n"
      "2003-01-02,13:00:00.01\n2003-01-02,15:00:00.00\n2003-01-03,09:45:12.34\n";
  EXPECT_EQ(serialize_ticks(parse_ticks(text)), text);
}

TEST(SerializeTicks, RoundTripOfRetainedRows) {
  const auto t = parse_ticks(
      "date,time\n2003-01-02,09:00:00.00\n2003-01-02,10:00:00.00\n2003-01-02,12:00:00.00\n");
  EXPECT_EQ(serialize_ticks(t), "date,time\n2003-01-02,10:00:00.00\n");
}

TEST(CollapseSimultaneous, RemovesDuplicates) {
  const auto c = collapse_simultaneous(morning({0, 300, 300, 1000}));
  ASSERT_EQ(c.ticks.size(), 3u);
  EXPECT_EQ(c.ticks[1].time_centis, 300);
  EXPECT_EQ(c.ticks[2].time_centis, 1000);
}

TEST(CollapseSimultaneous, TripleDuplicate) {
  const auto c = collapse_simultaneous(morning({500, 500, 500}));
  ASSERT_EQ(c.ticks.size(), 1u);
  EXPECT_EQ(c.ticks[0].time_centis, 500);
}

TEST(CollapseSimultaneous, IdentityWithoutDuplicates) {
  const auto c = collapse_simultaneous(morning({100, 200}));
  EXPECT_EQ(c.ticks, morning({100, 200}).ticks);
}

TEST(CollapseSimultaneous, SameClockInOtherSessionIsKept) {
  TickSeries t;
  t.dates = {"d"};
  t.ticks = {{0, Session::Morning, kSessionLengthCentis}, {0, Session::Afternoon, 0}};
  EXPECT_EQ(collapse_simultaneous(t).ticks.size(), 2u);
}

TEST(ComputeDurations, Differences) {
  const auto d = compute_durations(morning({0, 300, 1000}));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.entries[0].tau, 3.0);
  EXPECT_DOUBLE_EQ(d.entries[1].tau, 7.0);
}

TEST(ComputeDurations, NothingAcrossNoon) {
  TickSeries t;
  t.dates = {"d"};
  t.ticks = {{0, Session::Morning, 719950}, {0, Session::Afternoon, 50}};
  EXPECT_TRUE(compute_durations(t).empty());
}

TEST(ComputeDurations, NothingOvernight) {
  TickSeries t;
  t.dates = {"d0", "d1"};
  t.ticks = {{0, Session::Afternoon, 100}, {1, Session::Morning, 100}};
  EXPECT_TRUE(compute_durations(t).empty());
}

TEST(ComputeDurations, TagsTerminatingTradeBin) {
  TickSeries t;
  t.dates = {"d"};
  t.ticks = {{0, Session::Afternoon, 1000}, {0, Session::Afternoon, 3000}};
  const auto d = compute_durations(t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.entries[0].bin, 120);
  EXPECT_EQ(d.entries[0].session, Session::Afternoon);
}

TEST(ComputeDurations, CloseTradeFallsInLastBin) {
  EXPECT_EQ(bin_index(Session::Morning, kSessionLengthCentis), 119);
  EXPECT_EQ(bin_index(Session::Afternoon, kSessionLengthCentis), 239);
  EXPECT_EQ(bin_index(Session::Morning, 5999), 0);
  EXPECT_EQ(bin_index(Session::Morning, 6000), 1);
}

TEST(ComputeDurations, RejectsUncollapsedInput) {
  EXPECT_THROW(compute_durations(morning({0, 300, 300})), DataError);
}

TEST(ComputeDurations, SingleTickSessionsContributeNothing) {
  EXPECT_TRUE(compute_durations(morning({42})).empty());
  EXPECT_TRUE(compute_durations(morning({})).empty());
}

TEST(ComputeDurations, SessionSumsEqualSpan) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int32_t> step(0, 900);
  TickSeries t;
  t.dates = {"a", "b", "c"};
  for (int day = 0; day < 3; ++day) {
    for (Session s : {Session::Morning, Session::Afternoon}) {
      std::int32_t now = step(rng);
      while (now <= kSessionLengthCentis) {
        t.ticks.push_back(Tick{day, s, now});
        now += step(rng);
      }
    }
  }
  const auto collapsed = collapse_simultaneous(t);
  const auto d = compute_durations(collapsed);
  for (int day = 0; day < 3; ++day) {
    for (Session s : {Session::Morning, Session::Afternoon}) {
      std::int32_t first = -1, last = -1;
      for (const auto& tick : collapsed.ticks) {
        if (tick.day != day || tick.session != s) continue;
        if (first < 0) first = tick.time_centis;
        last = tick.time_centis;
      }
      std::int64_t sum_centis = 0;
      for (const auto& e : d.entries) {
        if (e.day == day && e.session == s) {
          sum_centis += static_cast<std::int64_t>(std::llround(e.tau * 100.0));
        }
      }
      EXPECT_EQ(sum_centis, last - first);
    }
  }
  for (const auto& e : d.entries) EXPECT_GT(e.tau, 0.0);
}

TEST(DurationCsv, RoundTrip) {
  DurationSeries s;
  s.entries = {{0.01, 0, 0, Session::Morning},
               {123.45, 0, 239, Session::Afternoon},
               {1.0 / 3.0, 4, 120, Session::Afternoon}};
  const auto text = serialize_durations(s);
  const auto back = parse_durations(text);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.entries[i].tau, s.entries[i].tau);
    EXPECT_EQ(back.entries[i].bin, s.entries[i].bin);
    EXPECT_EQ(back.entries[i].day, s.entries[i].day);
    EXPECT_EQ(back.entries[i].session, s.entries[i].session);
  }
  EXPECT_EQ(serialize_durations(back), text);
}

TEST(DurationCsv, Errors) {
  EXPECT_THROW(parse_durations("day,bin,tau\n0,240,1\n"), ParseError);
  EXPECT_THROW(parse_durations("day,bin,tau\n0,3,0\n"), ParseError);
  EXPECT_THROW(parse_durations("day,bin,tau\n0,3,-1\n"), ParseError);
  EXPECT_THROW(parse_durations("day,bin,tau\n1,3,1\n0,3,1\n"), OrderingError);
  EXPECT_THROW(parse_durations("tau\n1\n"), ParseError);
}

TEST(DurationSeriesCounts, DaysAndSessions) {
  DurationSeries s;
  s.entries = {{1, 0, 5, Session::Morning},
               {1, 0, 130, Session::Afternoon},
               {1, 2, 7, Session::Morning}};
  EXPECT_EQ(s.day_count(), 2);
  EXPECT_EQ(s.session_count(), 3u);
}
