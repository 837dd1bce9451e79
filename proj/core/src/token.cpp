#include "otpforge/token.hpp"

#include <stdexcept>

namespace otpforge {

Otp Otp::parse(std::string_view text) {
  if (text.size() != 1 + OtpBody::kDigits) throw std::invalid_argument("OTP must be 6 digits");
  if (text[0] < '0' || text[0] > '9') throw std::invalid_argument("OTP: non-digit character");
  return Otp{static_cast<std::uint8_t>(text[0] - '0'), OtpBody::parse(text.substr(1))};
}

std::string Otp::str() const { return static_cast<char>('0' + lead) + body.str(); }

Token::Token(TokenKey key, SyncModel sync, Instant t0, std::int64_t a0)
    : key_(std::move(key)), sync_(sync), t0_(t0), a0_(a0), counter_(a0), last_gen_(t0) {
  if (a0 < 0) throw std::invalid_argument("Token: initial counter must be non-negative");
}

PressResult Token::press(Instant t) {
  if (t < last_gen_) throw std::invalid_argument("Token::press: time went backwards");
  if (display_ && t - last_gen_ < kRedisplaySeconds) {
    display_->shown_at = t;
    return {display_->otp, PressKind::redisplay};
  }
  counter_ += step_delta(sync_, t, last_gen_);
  last_gen_ = t;
  display_ = Display{otp_for_counter(key_, counter_), t};
  return {display_->otp, PressKind::fresh};
}

Otp otp_for_counter(const TokenKey& key, std::int64_t counter) {
  return Otp{static_cast<std::uint8_t>(counter % 10), body(key, counter)};
}

std::vector<int> lead_pattern(std::span<const Otp> otps) {
  if (otps.size() < 2) throw std::invalid_argument("lead_pattern: need at least two OTPs");
  std::vector<int> out;
  out.reserve(otps.size() - 1);
  for (std::size_t i = 1; i < otps.size(); ++i) out.push_back((otps[i].lead - otps[i - 1].lead + 10) % 10);
  return out;
}

}  // namespace otpforge
