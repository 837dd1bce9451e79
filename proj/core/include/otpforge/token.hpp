#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otpforge/digitizer.hpp"
#include "otpforge/timebase.hpp"

namespace otpforge {

/// A six-digit combination: synchronization digit followed by the body.
struct Otp {
  std::uint8_t lead = 0;
  OtpBody body;

  /// Throws std::invalid_argument unless `text` is six decimal digits.
  static Otp parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Otp&, const Otp&) = default;
};

enum class PressKind { fresh, redisplay };

struct PressResult {
  Otp otp;
  PressKind kind;
};

/// Presses closer together than this redisplay the current OTP.
inline constexpr std::int64_t kRedisplaySeconds = 50;

/**
 * Emulated token. Keeps the step counter A and the time of the last
 * generation; a fresh OTP at time t advances A by step_delta(t, last_gen)
 * and shows (A mod 10, E_K(A)). Single owner; not thread-safe.
 */
class Token {
public:
  Token(TokenKey key, SyncModel sync, Instant t0, std::int64_t a0);

  /// Throws std::invalid_argument if `t` precedes the last generation.
  PressResult press(Instant t);

  std::int64_t counter() const { return counter_; }
  Instant last_generated() const { return last_gen_; }
  Instant base_time() const { return t0_; }
  std::int64_t base_counter() const { return a0_; }
  SyncModel sync() const { return sync_; }
  const TokenKey& key() const { return key_; }

  struct Display {
    Otp otp;
    Instant shown_at;
  };
  const std::optional<Display>& display() const { return display_; }

private:
  TokenKey key_;
  SyncModel sync_;
  Instant t0_;
  std::int64_t a0_;
  std::int64_t counter_;
  Instant last_gen_;
  std::optional<Display> display_;
};

/// The OTP a token holding `counter` shows.
Otp otp_for_counter(const TokenKey& key, std::int64_t counter);

/// Consecutive lead-digit differences mod 10. Needs at least two OTPs.
std::vector<int> lead_pattern(std::span<const Otp> otps);

}  // namespace otpforge
