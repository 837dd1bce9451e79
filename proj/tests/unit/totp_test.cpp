#include <gtest/gtest.h>

#include "otpforge/totp.hpp"
#include "support.hpp"

using namespace otpforge;
using namespace otpforge::totp;

namespace {
const TokenKey kKey = TokenKey::from_ascii("12345678901234567890");
}

TEST(Totp, CounterExamples) {
  const TotpParams p{Instant(0), 30, 6};
  EXPECT_EQ(totp_counter(Instant(59), p), 1);
  EXPECT_EQ(totp_counter(Instant(0), p), 0);
  EXPECT_EQ(totp_counter(Instant(60), p), 2);
  EXPECT_THROW(totp_counter(Instant(5), TotpParams{Instant(10), 30, 6}), std::invalid_argument);
  EXPECT_THROW(totp_counter(Instant(5), TotpParams{Instant(0), 0, 6}), std::invalid_argument);
  for (std::int64_t t = 0; t < 200; ++t) ASSERT_EQ(totp_counter(Instant(t + 30), p), totp_counter(Instant(t), p) + 1);
}

TEST(Totp, HotpMatchesOracleVectors) {
  for (const auto& c : test_support::load_vectors("hotp_vectors.txt"))
    EXPECT_EQ(hotp(TokenKey::from_hex(c.key_hex), c.counter), c.expected) << c.counter;
  EXPECT_EQ(hotp(kKey, 0), "755224");
  EXPECT_EQ(hotp(kKey, 1), "287082");
  EXPECT_EQ(hotp(kKey, 0, 8), "84755224");
  EXPECT_THROW(hotp(kKey, 0, 5), std::invalid_argument);
  EXPECT_THROW(hotp(kKey, 0, 9), std::invalid_argument);
}

TEST(Totp, VerifyWindow) {
  const TotpParams p{Instant(0), 30, 6};
  const Instant gen(3000);
  const auto code = hotp(kKey, totp_counter(gen, p));
  auto v = totp_verify(kKey, p, code, gen, 0);
  EXPECT_TRUE(v.accepted);
  EXPECT_EQ(v.comparisons, 1);
  for (int w = 0; w <= 20; ++w) {
    v = totp_verify(kKey, p, code, gen + 30 * w, w);
    EXPECT_TRUE(v.accepted);
    EXPECT_LE(v.comparisons, w + 1);
  }
  v = totp_verify(kKey, p, "000000", gen, 16);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.comparisons, 17);
  EXPECT_EQ(totp_verify(kKey, p, "000000", Instant(40), 16).comparisons, 2);  // never below counter 0
  EXPECT_THROW(totp_verify(kKey, p, code, gen, -1), std::invalid_argument);
}

TEST(Totp, WindowForFourHundredEightySeconds) {
  EXPECT_EQ(window_for_delay(480, 30), 16);
  EXPECT_EQ(window_for_delay(0, 30), 0);
  EXPECT_EQ(window_for_delay(31, 30), 2);
}

TEST(TotpProperty, DelayUpToStepTimesWindowAccepted) {
  const TotpParams p{Instant(0), 30, 6};
  for (int w : {0, 1, 4, 16})
    for (std::int64_t gen = 1000; gen < 1060; ++gen)
      for (std::int64_t d = 0; d <= 30 * w; ++d) {
        const auto code = hotp(kKey, totp_counter(Instant(gen), p));
        ASSERT_TRUE(totp_verify(kKey, p, code, Instant(gen + d), w).accepted) << w << ' ' << gen << ' ' << d;
      }
}
