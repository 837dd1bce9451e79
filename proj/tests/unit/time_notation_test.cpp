#include <gtest/gtest.h>

#include "otpforge/time_notation.hpp"

using namespace otpforge;

TEST(TimeNotation, ParsesSecondsAndStopwatch) {
  EXPECT_DOUBLE_EQ(parse_duration("50"), 50);
  EXPECT_DOUBLE_EQ(parse_duration("0:50"), 50);
  EXPECT_DOUBLE_EQ(parse_duration("0:50+"), 50.5);
  EXPECT_DOUBLE_EQ(parse_duration("12:40+", 0.25), 760.25);
  EXPECT_EQ(parse_seconds("7:59+"), 479);
  EXPECT_EQ(parse_seconds("8:00+"), 480);
  EXPECT_EQ(parse_seconds("1827"), 1827);
}

TEST(TimeNotation, Rejects) {
  for (const char* bad : {"", "abc", "1:6", "1:60", ":30", "1:30++", "-5", "0:50x"})
    EXPECT_THROW(parse_duration(bad), std::invalid_argument) << bad;
  EXPECT_THROW(parse_duration("0:50+", 1.0), std::invalid_argument);
}

TEST(TimeNotation, Range) {
  const auto r = parse_range("1:21+");
  EXPECT_DOUBLE_EQ(r.lo, 81);
  EXPECT_DOUBLE_EQ(r.hi, 82);
  EXPECT_DOUBLE_EQ(r.midpoint(), 81.5);
  const auto exact = parse_range("2:07");
  EXPECT_DOUBLE_EQ(exact.lo, exact.hi);
}

TEST(TimeNotation, Format) {
  EXPECT_EQ(format_mss(0), "0:00");
  EXPECT_EQ(format_mss(479), "7:59");
  EXPECT_EQ(format_mss(646), "10:46");
}
