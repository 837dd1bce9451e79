#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "otpforge/digitizer.hpp"
#include "otpforge/timebase.hpp"
#include "otpforge/token.hpp"

namespace otpforge {

/// Server-side view of one enrolled customer.
struct CustomerRecord {
  std::string id;
  std::string static_digest;  // sha256_hex of the static password
  TokenKey key;
  Instant t0;
  std::int64_t a0 = 0;
  std::int64_t high_water = 0;  // largest accepted counter; starts at a0
  int failures = 0;
  bool locked = false;
  int max_attempts = 3;

  friend bool operator==(const CustomerRecord&, const CustomerRecord&) = default;
};

enum class VerifyStatus { accept, reject };
enum class VerifyReason { ok, bad_static, bad_otp, replay, stale, locked, unknown_customer };

std::string_view to_string(VerifyStatus s);
std::string_view to_string(VerifyReason r);
VerifyStatus parse_status(std::string_view s);
VerifyReason parse_reason(std::string_view s);

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::reject;
  VerifyReason reason = VerifyReason::bad_otp;
  std::optional<std::int64_t> recovered_a;
  std::optional<Instant> estimated_generation;
  int comparisons = 0;  // E_K evaluations spent on this attempt

  bool accepted() const { return status == VerifyStatus::accept; }
};

/// Observed delay cutoff of the production server.
inline constexpr std::int64_t kDefaultMaxDelay = 480;
/// Attempts allowed before lockout at the bank studied.
inline constexpr int kDefaultMaxAttempts = 3;

struct VerifierConfig {
  /// Reject when submission time minus estimated generation time reaches
  /// this many seconds. Unset: recover the counter from the ten-step window
  /// alone, the bare three-step protocol.
  std::optional<std::int64_t> max_delay = kDefaultMaxDelay;
  bool check_replay = true;
  bool enforce_lockout = true;

  /// Counter recovery plus one comparison, nothing else.
  static VerifierConfig single_attempt_model() { return {std::nullopt, false, false}; }
};

/// B with B-1 <= (t' - t0)/64 < B. Throws std::invalid_argument if t' < t0.
std::int64_t compute_b(Instant t_prime, Instant t0);

/// The unique value in {B-9, ..., B} congruent to lead - a0 mod 10.
std::int64_t recover_f(int lead, std::int64_t a0, std::int64_t b);

CustomerRecord provision(std::string id, TokenKey key, Instant t0, std::int64_t a0,
                         std::string_view static_credential, int max_attempts = kDefaultMaxAttempts);

/// Decide an attempt without touching the record. `static_credential` is
/// skipped when empty-optional (the caller already authenticated it).
VerifyOutcome evaluate(const CustomerRecord& record, std::optional<std::string_view> static_credential,
                       std::string_view otp_text, Instant t_prime, const VerifierConfig& config = {});
VerifyOutcome evaluate(const CustomerRecord& record, const Otp& otp, Instant t_prime,
                       const VerifierConfig& config = {});

/// Record transition for a decided attempt: accept advances the high-water
/// mark and clears failures; any other reject except `locked` and
/// `unknown-customer` counts a failure and may lock the record.
void apply_outcome(CustomerRecord& record, const VerifyOutcome& outcome, const VerifierConfig& config = {});

/// evaluate + apply_outcome.
VerifyOutcome verify(CustomerRecord& record, std::optional<std::string_view> static_credential,
                     std::string_view otp_text, Instant t_prime, const VerifierConfig& config = {});
VerifyOutcome verify(CustomerRecord& record, const Otp& otp, Instant t_prime, const VerifierConfig& config = {});

/// Administrative unlock.
void reset_lockout(CustomerRecord& record);

}  // namespace otpforge
