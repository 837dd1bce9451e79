#include "otpforge/verifier.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "otpforge/hmac.hpp"

namespace otpforge {
namespace {

constexpr std::array<std::pair<VerifyReason, std::string_view>, 7> kReasonNames{{
    {VerifyReason::ok, "ok"},
    {VerifyReason::bad_static, "bad-static"},
    {VerifyReason::bad_otp, "bad-otp"},
    {VerifyReason::replay, "replay"},
    {VerifyReason::stale, "stale"},
    {VerifyReason::locked, "locked"},
    {VerifyReason::unknown_customer, "unknown-customer"},
}};

VerifyOutcome rejected(VerifyReason reason) { return {VerifyStatus::reject, reason, std::nullopt, std::nullopt, 0}; }

std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

std::string_view to_string(VerifyStatus s) { return s == VerifyStatus::accept ? "accept" : "reject"; }

std::string_view to_string(VerifyReason r) {
  for (auto [reason, name] : kReasonNames)
    if (reason == r) return name;
  return "?";
}

VerifyStatus parse_status(std::string_view s) {
  if (s == "accept") return VerifyStatus::accept;
  if (s == "reject") return VerifyStatus::reject;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

VerifyReason parse_reason(std::string_view s) {
  for (auto [reason, name] : kReasonNames)
    if (name == s) return reason;
  throw std::invalid_argument("unknown reason '" + std::string(s) + "'");
}

std::int64_t compute_b(Instant t_prime, Instant t0) {
  if (t_prime < t0) throw std::invalid_argument("compute_b: submission precedes the base time");
  return (t_prime - t0) / kStepSeconds + 1;
}

std::int64_t recover_f(int lead, std::int64_t a0, std::int64_t b) {
  const std::int64_t residue = floor_mod(lead - a0, 10);
  const std::int64_t lo = b - 9;
  return lo + floor_mod(residue - lo, 10);
}

CustomerRecord provision(std::string id, TokenKey key, Instant t0, std::int64_t a0,
                         std::string_view static_credential, int max_attempts) {
  if (id.empty() || id.find_first_of(",\n\r\t ") != std::string::npos)
    throw std::invalid_argument("provision: customer id must be non-empty without separators");
  if (a0 < 0) throw std::invalid_argument("provision: initial counter must be non-negative");
  if (max_attempts < 1) throw std::invalid_argument("provision: max_attempts must be positive");
  CustomerRecord r{std::move(id), sha256_hex(static_credential), std::move(key), t0, a0, a0, 0, false, max_attempts};
  return r;
}

VerifyOutcome evaluate(const CustomerRecord& record, const Otp& otp, Instant t_prime,
                       const VerifierConfig& config) {
  if (record.locked) return rejected(VerifyReason::locked);
  if (t_prime < record.t0) return rejected(VerifyReason::bad_otp);

  const std::int64_t b = compute_b(t_prime, record.t0);
  const std::int64_t f = recover_f(otp.lead, record.a0, b);
  if (f < 0) return rejected(VerifyReason::bad_otp);  // would predate enrollment

  VerifyOutcome out = rejected(VerifyReason::bad_otp);
  out.recovered_a = record.a0 + f;
  out.estimated_generation = record.t0 + kStepSeconds * f;

  if (config.max_delay && t_prime - *out.estimated_generation >= *config.max_delay) {
    out.reason = VerifyReason::stale;
    return out;
  }
  if (config.check_replay && *out.recovered_a <= record.high_water) {
    out.reason = VerifyReason::replay;
    return out;
  }
  out.comparisons = 1;
  if (body(record.key, *out.recovered_a) == otp.body) {
    out.status = VerifyStatus::accept;
    out.reason = VerifyReason::ok;
  }
  return out;
}

VerifyOutcome evaluate(const CustomerRecord& record, std::optional<std::string_view> static_credential,
                       std::string_view otp_text, Instant t_prime, const VerifierConfig& config) {
  if (record.locked) return rejected(VerifyReason::locked);
  if (static_credential && sha256_hex(*static_credential) != record.static_digest)
    return rejected(VerifyReason::bad_static);
  Otp otp;
  try {
    otp = Otp::parse(otp_text);
  } catch (const std::invalid_argument&) {
    return rejected(VerifyReason::bad_otp);
  }
  return evaluate(record, otp, t_prime, config);
}

void apply_outcome(CustomerRecord& record, const VerifyOutcome& outcome, const VerifierConfig& config) {
  if (outcome.accepted()) {
    if (!outcome.recovered_a) throw std::logic_error("accepted outcome without a counter");
    if (*outcome.recovered_a > record.high_water) record.high_water = *outcome.recovered_a;
    record.failures = 0;
    return;
  }
  if (outcome.reason == VerifyReason::locked || outcome.reason == VerifyReason::unknown_customer) return;
  if (!config.enforce_lockout) return;
  record.failures = std::min(record.failures + 1, record.max_attempts);
  if (record.failures >= record.max_attempts) record.locked = true;
}

VerifyOutcome verify(CustomerRecord& record, std::optional<std::string_view> static_credential,
                     std::string_view otp_text, Instant t_prime, const VerifierConfig& config) {
  auto out = evaluate(record, static_credential, otp_text, t_prime, config);
  apply_outcome(record, out, config);
  return out;
}

VerifyOutcome verify(CustomerRecord& record, const Otp& otp, Instant t_prime, const VerifierConfig& config) {
  auto out = evaluate(record, otp, t_prime, config);
  apply_outcome(record, out, config);
  return out;
}

void reset_lockout(CustomerRecord& record) {
  record.failures = 0;
  record.locked = false;
}

}  // namespace otpforge
