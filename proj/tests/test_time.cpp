#include <gtest/gtest.h>

#include "ctfeed/time.hpp"

using namespace ctfeed;

TEST(Time, ParsesAndFormatsInstant) {
  auto t = parse_instant("2018-08-24 16:57:54");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_instant(*t), "2018-08-24 16:57:54");
  auto next = parse_instant("2018-08-25 00:00:00");
  EXPECT_EQ((*next - *t).count(), 7 * 3600 + 2 * 60 + 6);
}

TEST(Time, RejectsMalformedInstants) {
  for (const char* bad :
       {"2018-8-24 16:57:54", "2018-08-24T16:57:54", "2018-02-30 10:00:00", "2018-08-24 24:00:00",
        "2018-08-24 10:60:00", "2018-08-24 10:00", "2018-08-24 10:00:0x", ""})
    EXPECT_FALSE(parse_instant(bad)) << bad;
}

TEST(Time, LeapDay) {
  EXPECT_TRUE(parse_instant("2020-02-29 12:00:00"));
  EXPECT_FALSE(parse_instant("2019-02-29 12:00:00"));
}

TEST(Time, DurationRoundTrip) {
  auto d = parse_duration("00:03:42");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->count(), 222);
  EXPECT_EQ(format_duration(*d), "00:03:42");
  EXPECT_EQ(format_duration(seconds{100 * 3600 + 5}), "100:00:05");
  EXPECT_EQ(parse_duration("100:00:05")->count(), 100 * 3600 + 5);
}

TEST(Time, RejectsMalformedDurations) {
  for (const char* bad :
       {"3:42", "0:03:42", "00:60:00", "00:00:60", "00:03", "aa:bb:cc", "-1:00:00"})
    EXPECT_FALSE(parse_duration(bad)) << bad;
}
