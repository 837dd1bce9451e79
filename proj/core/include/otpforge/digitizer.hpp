#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otpforge/hmac.hpp"

namespace otpforge {

/// Per-token secret. At least 16 bytes.
class TokenKey {
public:
  static constexpr std::size_t kMinBytes = 16;

  explicit TokenKey(std::vector<std::uint8_t> bytes);
  static TokenKey from_hex(std::string_view hex);
  static TokenKey from_ascii(std::string_view text);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::string hex() const { return to_hex(bytes_); }

  friend bool operator==(const TokenKey&, const TokenKey&) = default;

private:
  std::vector<std::uint8_t> bytes_;
};

/// The five trailing digits of an OTP.
class OtpBody {
public:
  static constexpr std::size_t kDigits = 5;

  constexpr OtpBody() = default;
  explicit OtpBody(std::array<std::uint8_t, kDigits> digits);
  /// Throws std::invalid_argument unless `text` is exactly five decimal digits.
  static OtpBody parse(std::string_view text);

  const std::array<std::uint8_t, kDigits>& digits() const { return digits_; }
  std::uint8_t operator[](std::size_t i) const { return digits_[i]; }
  std::string str() const;

  friend bool operator==(const OtpBody&, const OtpBody&) = default;

private:
  std::array<std::uint8_t, kDigits> digits_{};
};

/// First 20 bits (MSB first) of HMAC-SHA-1(key, counter as 8 bytes big-endian).
std::uint32_t prf20(const TokenKey& key, std::int64_t counter);

/// Five nibbles, most significant first, each reduced mod 10. Digits 0..5 have
/// two preimages among the 16 nibble values, digits 6..9 have one.
OtpBody body_from_bits(std::uint32_t bits20);

/// The keyed map from step counter to OTP body shared by token and verifier.
OtpBody body(const TokenKey& key, std::int64_t counter);

/// Keyed form of body() that keeps its MAC context; one instance per thread.
class Digitizer {
public:
  explicit Digitizer(const TokenKey& key) : mac_(key.bytes()) {}

  std::uint32_t prf20(std::int64_t counter);
  OtpBody body(std::int64_t counter) { return body_from_bits(prf20(counter)); }

private:
  HmacSha1 mac_;
};

/// 8-byte big-endian encoding shared with the RFC 4226 moving factor.
std::array<std::uint8_t, 8> counter_bytes(std::int64_t counter);

}  // namespace otpforge
