#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "otpforge/registry.hpp"
#include "otpforge/token.hpp"

using namespace otpforge;

namespace {
const TokenKey kKey = TokenKey::from_ascii("12345678901234567890");
}

TEST(Registry, AddFindDuplicate) {
  Registry reg;
  reg.add(provision("alice", kKey, Instant(63), 0, "pw"));
  EXPECT_EQ(reg.size(), 1u);
  EXPECT_TRUE(reg.find("alice").has_value());
  EXPECT_FALSE(reg.find("bob").has_value());
  EXPECT_THROW(reg.add(provision("alice", kKey, Instant(63), 0, "pw")), std::invalid_argument);
}

TEST(Registry, UnknownCustomer) {
  Registry reg;
  EXPECT_EQ(reg.verify("ghost", std::string_view("pw"), "123456", Instant(5)).reason, VerifyReason::unknown_customer);
  EXPECT_FALSE(reg.reset_lockout("ghost"));
}

TEST(Registry, SnapshotRoundTrip) {
  Registry reg;
  reg.add(provision("alice", kKey, Instant(63), 0, "pw"));
  reg.add(provision("bob", TokenKey::from_hex("00112233445566778899aabbccddeeff"), Instant(127), 12, "x", 5));
  Token tok(kKey, SyncModel(0), Instant(63), 0);
  const auto otp = tok.press(Instant(1000)).otp;
  ASSERT_TRUE(reg.verify("alice", std::string_view("pw"), otp.str(), Instant(1010)).accepted());
  reg.verify("bob", std::string_view("wrong"), otp.str(), Instant(1010));

  std::stringstream ss;
  reg.save_snapshot(ss);
  const Registry back = Registry::load_snapshot(ss);
  EXPECT_EQ(back, reg);
  EXPECT_EQ(back.find("bob")->failures, 1);
  EXPECT_EQ(back.find("alice")->high_water, tok.counter());
}

TEST(Registry, SnapshotErrorsNameTheLine) {
  std::stringstream ss("alice,zz,0,0,0,0,0,3,abc\n");
  try {
    Registry::load_snapshot(ss);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  std::stringstream short_line("alice,3132333435363738393031323334353637383930,0\n");
  EXPECT_THROW(Registry::load_snapshot(short_line), std::runtime_error);
}

TEST(Registry, ConcurrentCustomersAndSerializedSameCustomer) {
  Registry reg;
  const int customers = 8;
  for (int i = 0; i < customers; ++i) reg.add(provision("c" + std::to_string(i), kKey, Instant(63), 0, "pw", 1000));
  Token tok(kKey, SyncModel(0), Instant(63), 0);
  const std::string otp = tok.press(Instant(5000)).otp.str();
  std::atomic<int> accepts{0};
  std::vector<std::thread> threads;
  for (int w = 0; w < 16; ++w)
    threads.emplace_back([&, w] {
      for (int i = 0; i < customers; ++i)
        if (reg.verify("c" + std::to_string((i + w) % customers), std::string_view("pw"), otp, Instant(5010)).accepted())
          ++accepts;
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(accepts.load(), customers);  // exactly one acceptance per customer, the rest are replays
  for (const auto& r : reg.records()) EXPECT_EQ(r.high_water, tok.counter());
}
