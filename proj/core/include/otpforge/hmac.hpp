#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace otpforge {

using Sha1Digest = std::array<std::uint8_t, 20>;

/// Keyed HMAC-SHA-1 context (OpenSSL EVP_MAC underneath). An instance is
/// not safe for concurrent use; copy it per thread.
class HmacSha1 {
public:
  explicit HmacSha1(std::span<const std::uint8_t> key);
  HmacSha1(const HmacSha1& other);
  HmacSha1& operator=(const HmacSha1& other);
  HmacSha1(HmacSha1&&) noexcept = default;
  HmacSha1& operator=(HmacSha1&&) noexcept = default;
  ~HmacSha1();

  Sha1Digest digest(std::span<const std::uint8_t> message);

private:
  struct CtxDeleter {
    void operator()(void* ctx) const;
  };
  std::unique_ptr<void, CtxDeleter> ctx_;
};

Sha1Digest hmac_sha1(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);

/// Lower-case hex SHA-256 of `text`; used as the opaque static-credential digest.
std::string sha256_hex(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace otpforge
