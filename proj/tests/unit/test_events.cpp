#include <gtest/gtest.h>

#include <cmath>

#include <sstream>

#include "yeast/errors.hpp"
#include "yeast/events.hpp"

using yeast::Group;

TEST(Increment, SignConvention) {
  yeast::Event c{1, {}, "a", Group::control, 175.0};
  yeast::Event t{2, {}, "b", Group::treatment, 35.5};
  EXPECT_EQ(yeast::increment_from_event(c).value, 175.0);
  EXPECT_EQ(yeast::increment_from_event(t).value, -35.5);
  t.outcome = 0.0;
  EXPECT_EQ(yeast::increment_from_event(t).value, 0.0);
  t.outcome = INFINITY;
  EXPECT_THROW(yeast::increment_from_event(t), yeast::DataError);
}

TEST(Timestamp, ParsesRfc3339Variants) {
  const auto base = yeast::parse_timestamp("2023-08-01T12:00:00Z");
  EXPECT_EQ(yeast::format_timestamp(base), "2023-08-01T12:00:00Z");
  EXPECT_EQ(yeast::parse_timestamp("2023-08-01 12:00:00"), base);
  EXPECT_EQ(yeast::parse_timestamp("2023-08-01t14:00:00+02:00"), base);
  EXPECT_EQ(yeast::parse_timestamp("2023-08-01T07:30:00-04:30"), base);
  const auto frac = yeast::parse_timestamp("2023-08-01T12:00:00.25Z");
  EXPECT_EQ(frac - base, std::chrono::microseconds(250000));
  EXPECT_EQ(yeast::format_timestamp(frac), "2023-08-01T12:00:00.250000Z");
}

TEST(Timestamp, RejectsMalformed) {
  for (const char* bad : {"2023-08-01", "2023-13-01T00:00:00Z", "2023-02-30T00:00:00Z", "2023-08-01T25:00:00Z",
                          "2023-08-01T12:00:00.Z", "2023-08-01T12:00:00+0200", "yesterday"}) {
    EXPECT_THROW(yeast::parse_timestamp(bad), yeast::DataError) << bad;
  }
}

TEST(Group, Parse) {
  EXPECT_EQ(yeast::parse_group("control"), Group::control);
  EXPECT_EQ(yeast::parse_group("treatment"), Group::treatment);
  EXPECT_THROW(yeast::parse_group("Control"), yeast::DataError);
}

TEST(ReadEvents, Csv) {
  std::istringstream in(
      "i,timestamp,subject_id,group,y\n"
      "1,2023-08-01T10:00:00Z,u1,control,175\n"
      "\n"
      "2,2023-08-01T10:01:00Z,\"u,2\",treatment,35.5\n");
  const auto events = yeast::read_events(in, yeast::EventFormat::csv);
  ASSERT_EQ(events.size(), 2U);
  EXPECT_EQ(events[1].subject_id, "u,2");
  EXPECT_EQ(events[1].group, Group::treatment);
  EXPECT_EQ(events[1].outcome, 35.5);
  EXPECT_EQ(events[0].index, 1);
}

TEST(ReadEvents, EmptyInputGivesNoEvents) {
  std::istringstream in("");
  EXPECT_TRUE(yeast::read_events(in, yeast::EventFormat::csv).empty());
  std::istringstream header_only("i,timestamp,subject_id,group,y\n");
  EXPECT_TRUE(yeast::read_events(header_only, yeast::EventFormat::csv).empty());
}

TEST(ReadEvents, ErrorsCarryLineNumbers) {
  std::istringstream in(
      "i,timestamp,subject_id,group,y\n"
      "1,2023-08-01T10:00:00Z,u1,control,175\n"
      "2,2023-08-01T10:01:00Z,u2,placebo,3\n");
  try {
    yeast::read_events(in, yeast::EventFormat::csv);
    FAIL() << "expected DataError";
  } catch (const yeast::DataError& e) {
    ASSERT_TRUE(e.line().has_value());
    EXPECT_EQ(*e.line(), 3U);
  }
  std::istringstream bad_header("n,timestamp,subject_id,group,y\n");
  EXPECT_THROW(yeast::read_events(bad_header, yeast::EventFormat::csv), yeast::DataError);
  std::istringstream bad_number("i,timestamp,subject_id,group,y\n1,2023-08-01T10:00:00Z,u1,control,abc\n");
  EXPECT_THROW(yeast::read_events(bad_number, yeast::EventFormat::csv), yeast::DataError);
  std::istringstream short_row("i,timestamp,subject_id,group,y\n1,2023-08-01T10:00:00Z,u1,control\n");
  EXPECT_THROW(yeast::read_events(short_row, yeast::EventFormat::csv), yeast::DataError);
}

TEST(ReadEvents, Ndjson) {
  std::istringstream in(
      R"({"i": 1, "timestamp": "2023-08-01T10:00:00Z", "subject_id": "u1", "group": "control", "y": 175})"
      "\n"
      R"({"i": 2, "timestamp": "2023-08-01T10:01:00Z", "subject_id": "u2", "group": "treatment", "y": 35.5})"
      "\n");
  const auto events = yeast::read_events(in, yeast::EventFormat::ndjson);
  ASSERT_EQ(events.size(), 2U);
  EXPECT_EQ(events[1].outcome, 35.5);
  std::istringstream bad(R"({"i": 1, "timestamp": "2023-08-01T10:00:00Z"})"
                         "\n");
  try {
    yeast::read_events(bad, yeast::EventFormat::ndjson);
    FAIL() << "expected DataError";
  } catch (const yeast::DataError& e) {
    EXPECT_EQ(e.line(), std::optional<std::size_t>(1));
  }
  std::istringstream garbage("{not json}\n");
  EXPECT_THROW(yeast::read_events(garbage, yeast::EventFormat::ndjson), yeast::DataError);
}

TEST(WriteEvents, RoundTripBothFormats) {
  std::vector<yeast::Event> events{
      {1, yeast::parse_timestamp("2023-08-01T10:00:00.123456Z"), "alpha", Group::control, 0.1},
      {2, yeast::parse_timestamp("2023-08-01T10:00:01Z"), "b\"eta,x", Group::treatment, -1e-300},
  };
  std::stringstream csv;
  yeast::write_events_csv(csv, events);
  EXPECT_EQ(yeast::read_events(csv, yeast::EventFormat::csv), events);
  std::stringstream nd;
  yeast::write_events_ndjson(nd, events);
  EXPECT_EQ(yeast::read_events(nd, yeast::EventFormat::ndjson), events);
}
