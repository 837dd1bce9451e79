#include "otpforge/digitizer.hpp"

#include <optional>
#include <stdexcept>

namespace otpforge {

TokenKey::TokenKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  if (bytes_.size() < kMinBytes)
    throw std::invalid_argument("TokenKey: need at least 16 bytes, got " + std::to_string(bytes_.size()));
}

TokenKey TokenKey::from_hex(std::string_view hex) {
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw std::invalid_argument("TokenKey: non-hex character in key");
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("TokenKey: odd-length hex key");
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  return TokenKey(std::move(out));
}

TokenKey TokenKey::from_ascii(std::string_view text) { return TokenKey({text.begin(), text.end()}); }

OtpBody::OtpBody(std::array<std::uint8_t, kDigits> digits) : digits_(digits) {
  for (auto d : digits_)
    if (d > 9) throw std::invalid_argument("OtpBody: digit out of range");
}

OtpBody OtpBody::parse(std::string_view text) {
  if (text.size() != kDigits) throw std::invalid_argument("OtpBody: expected 5 digits");
  std::array<std::uint8_t, kDigits> d{};
  for (std::size_t i = 0; i < kDigits; ++i) {
    if (text[i] < '0' || text[i] > '9') throw std::invalid_argument("OtpBody: non-digit character");
    d[i] = static_cast<std::uint8_t>(text[i] - '0');
  }
  return OtpBody(d);
}

std::string OtpBody::str() const {
  std::string s(kDigits, '0');
  for (std::size_t i = 0; i < kDigits; ++i) s[i] = static_cast<char>('0' + digits_[i]);
  return s;
}

std::array<std::uint8_t, 8> counter_bytes(std::int64_t counter) {
  if (counter < 0) throw std::invalid_argument("counter must be non-negative");
  std::array<std::uint8_t, 8> out{};
  auto v = static_cast<std::uint64_t>(counter);
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
  return out;
}

namespace {

std::uint32_t top20(const Sha1Digest& d) {
  return (static_cast<std::uint32_t>(d[0]) << 12) | (static_cast<std::uint32_t>(d[1]) << 4) |
         (static_cast<std::uint32_t>(d[2]) >> 4);
}

}  // namespace

std::uint32_t Digitizer::prf20(std::int64_t counter) {
  const auto msg = counter_bytes(counter);
  return top20(mac_.digest(msg));
}

OtpBody body_from_bits(std::uint32_t bits20) {
  std::array<std::uint8_t, OtpBody::kDigits> d{};
  for (std::size_t i = 0; i < OtpBody::kDigits; ++i) {
    const auto nib = (bits20 >> (16 - 4 * i)) & 0xFu;
    d[i] = static_cast<std::uint8_t>(nib % 10);
  }
  return OtpBody(d);
}

std::uint32_t prf20(const TokenKey& key, std::int64_t counter) {
  // Verification loops hit the same key repeatedly; keep its MAC context.
  thread_local std::optional<TokenKey> cached_key;
  thread_local std::optional<Digitizer> cached;
  if (!cached_key || *cached_key != key) {
    cached.emplace(key);
    cached_key = key;
  }
  return cached->prf20(counter);
}

OtpBody body(const TokenKey& key, std::int64_t counter) { return body_from_bits(prf20(key, counter)); }

}  // namespace otpforge
