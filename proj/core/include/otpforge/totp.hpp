#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "otpforge/digitizer.hpp"
#include "otpforge/timebase.hpp"

namespace otpforge::totp {

struct TotpParams {
  Instant t0;
  std::int64_t step = 30;
  int digits = 6;
};

/// floor((now - t0) / step). Throws std::invalid_argument if now < t0 or step <= 0.
std::int64_t totp_counter(Instant now, const TotpParams& params);

/// RFC 4226 HOTP with HMAC-SHA-1 and dynamic truncation; digits in [6, 8].
std::string hotp(const TokenKey& key, std::int64_t counter, int digits = 6);

struct TotpVerdict {
  bool accepted = false;
  int comparisons = 0;
};

/// Tries counters T, T-1, ..., T-window (never below 0), stopping at the
/// first match.
TotpVerdict totp_verify(const TokenKey& key, const TotpParams& params, std::string_view submitted, Instant now,
                        int window);

/// Smallest backward window that still accepts a code delayed by `delay` seconds
/// in the worst case: ceil(delay / step).
int window_for_delay(std::int64_t delay, std::int64_t step);

}  // namespace otpforge::totp
