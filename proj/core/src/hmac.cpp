#include "otpforge/hmac.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <stdexcept>

namespace otpforge {
namespace {

EVP_MAC* hmac_algorithm() {
  static EVP_MAC* mac = [] {
    EVP_MAC* m = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (m == nullptr) throw std::runtime_error("OpenSSL: HMAC unavailable");
    return m;
  }();
  return mac;
}

EVP_MAC_CTX* as_ctx(void* p) { return static_cast<EVP_MAC_CTX*>(p); }

}  // namespace

void HmacSha1::CtxDeleter::operator()(void* ctx) const { EVP_MAC_CTX_free(as_ctx(ctx)); }

HmacSha1::HmacSha1(std::span<const std::uint8_t> key) : ctx_(EVP_MAC_CTX_new(hmac_algorithm())) {
  if (!ctx_) throw std::runtime_error("OpenSSL: EVP_MAC_CTX_new failed");
  char digest_name[] = "SHA1";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
      OSSL_PARAM_construct_end(),
  };
  if (EVP_MAC_init(as_ctx(ctx_.get()), key.data(), key.size(), params) != 1)
    throw std::runtime_error("OpenSSL: EVP_MAC_init failed");
}

HmacSha1::HmacSha1(const HmacSha1& other) : ctx_(EVP_MAC_CTX_dup(as_ctx(other.ctx_.get()))) {
  if (!ctx_) throw std::runtime_error("OpenSSL: EVP_MAC_CTX_dup failed");
}

HmacSha1& HmacSha1::operator=(const HmacSha1& other) {
  if (this != &other) *this = HmacSha1(other);
  return *this;
}

HmacSha1::~HmacSha1() = default;

Sha1Digest HmacSha1::digest(std::span<const std::uint8_t> message) {
  // The keyed context stays pristine; each message runs on a copy.
  std::unique_ptr<void, CtxDeleter> work(EVP_MAC_CTX_dup(as_ctx(ctx_.get())));
  EVP_MAC_CTX* ctx = as_ctx(work.get());
  if (ctx == nullptr || EVP_MAC_update(ctx, message.data(), message.size()) != 1)
    throw std::runtime_error("OpenSSL: HMAC update failed");
  Sha1Digest out{};
  std::size_t len = 0;
  if (EVP_MAC_final(ctx, out.data(), &len, out.size()) != 1 || len != out.size())
    throw std::runtime_error("OpenSSL: HMAC final failed");
  return out;
}

Sha1Digest hmac_sha1(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message) {
  return HmacSha1(key).digest(message);
}

std::string sha256_hex(std::string_view text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("OpenSSL: SHA-256 failed");
  return to_hex(std::span<const std::uint8_t>(md, len));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

}  // namespace otpforge
