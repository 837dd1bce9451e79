#include "otpforge/totp.hpp"

#include <stdexcept>

#include "otpforge/hmac.hpp"

namespace otpforge::totp {

std::int64_t totp_counter(Instant now, const TotpParams& params) {
  if (params.step <= 0) throw std::invalid_argument("totp: step must be positive");
  if (now < params.t0) throw std::invalid_argument("totp: now precedes T0");
  return (now - params.t0) / params.step;
}

std::string hotp(const TokenKey& key, std::int64_t counter, int digits) {
  if (digits < 6 || digits > 8) throw std::invalid_argument("hotp: digits must be 6, 7 or 8");
  const auto msg = counter_bytes(counter);
  const Sha1Digest d = hmac_sha1(key.bytes(), msg);
  const unsigned offset = d[19] & 0xFu;
  const std::uint32_t code = ((static_cast<std::uint32_t>(d[offset]) & 0x7Fu) << 24) |
                             (static_cast<std::uint32_t>(d[offset + 1]) << 16) |
                             (static_cast<std::uint32_t>(d[offset + 2]) << 8) |
                             static_cast<std::uint32_t>(d[offset + 3]);
  std::uint32_t mod = 1;
  for (int i = 0; i < digits; ++i) mod *= 10;
  std::string s = std::to_string(code % mod);
  return std::string(static_cast<std::size_t>(digits) - s.size(), '0') + s;
}

TotpVerdict totp_verify(const TokenKey& key, const TotpParams& params, std::string_view submitted, Instant now,
                        int window) {
  if (window < 0) throw std::invalid_argument("totp_verify: negative window");
  const std::int64_t t = totp_counter(now, params);
  TotpVerdict v;
  for (std::int64_t c = t; c >= 0 && c >= t - window; --c) {
    ++v.comparisons;
    if (hotp(key, c, params.digits) == submitted) {
      v.accepted = true;
      break;
    }
  }
  return v;
}

int window_for_delay(std::int64_t delay, std::int64_t step) {
  if (delay < 0 || step <= 0) throw std::invalid_argument("window_for_delay: bad arguments");
  return static_cast<int>((delay + step - 1) / step);
}

}  // namespace otpforge::totp
