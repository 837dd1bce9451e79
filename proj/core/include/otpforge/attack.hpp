#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "otpforge/token.hpp"
#include "otpforge/verifier.hpp"

namespace otpforge::attack {

/// 8^5: the inverse per-attempt success probability of a skewed forgery.
inline constexpr double kSkewedSpace = 32768.0;

using Rng = std::mt19937_64;

/// Independent generator per (seed, stream, index).
Rng stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
/// 20 random key bytes.
TokenKey random_key(Rng& rng);

/// Random lead; body digits uniform on {0..5}, the six most likely values
/// of every position.
Otp forge(Rng& rng);
/// Body digits uniform on {0..9} (the naive guess).
Otp forge_uniform(Rng& rng);

/// 1 - (1 - 8^-5)^x.
double p_success(std::int64_t x);

/// Drop digits beyond `places` decimals (the success table is quoted this way).
double truncate_places(double value, int places);

/// Text table with a header row r and a row p(auths*r), values to 4 places.
std::string success_table(int r_min, int r_max, int auths_per_year = 120);

enum class Strategy { burst, stealth };
std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct CampaignConfig {
  std::int64_t customers = 10000;
  int auths_per_year = 120;
  int max_attempts = kDefaultMaxAttempts;  // r
  /// Forgeries after each genuine login; defaults to r (burst) or r-1 (stealth).
  std::optional<int> attempts_per_auth;
  double years = 1.0;
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::burst;
  unsigned workers = 0;  // 0: hardware concurrency
  /// Replay and lockout stay on. The delay bound is off because with it a
  /// uniformly random lead lands on an expired counter 15% of the time.
  VerifierConfig verifier{std::nullopt, true, true};

  int forgeries_per_auth() const;
  std::int64_t auth_count() const;
};

struct CustomerOutcome {
  std::int64_t index = 0;
  std::int64_t attempts = 0;
  bool compromised = false;
  std::optional<std::int64_t> compromised_at_auth;
  int lockouts = 0;
  int genuine_rejects = 0;
};

struct CampaignReport {
  CampaignConfig config;
  std::int64_t attempts = 0;  // total forgeries submitted
  std::int64_t compromised = 0;
  double expected = 0;  // N * p(attempts per customer)
  double stddev = 0;    // binomial
  std::int64_t genuine_rejects = 0;
  std::vector<CustomerOutcome> per_customer;

  std::string csv() const;
  std::string table() const;
};

/// Simulates every customer's year: genuine logins spaced days apart, each
/// followed more than ten steps later by a series of forgeries through the
/// customer's own verifier record. Deterministic in `seed`; each customer
/// draws from its own stream, so the worker count does not change results.
CampaignReport run_campaign(const CampaignConfig& cfg);

enum class Forger { skewed, uniform, oracle };

struct RateResult {
  std::int64_t trials = 0;
  std::int64_t accepted = 0;
  std::array<std::int64_t, 10> trials_by_lead{};
  std::array<std::int64_t, 10> accepted_by_lead{};
  std::int64_t comparisons = 0;

  double rate() const { return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0; }
};

/// Independent forgeries against one provisioned record whose state is
/// never updated (no replay or lockout). Submission times are spread over
/// ~68 years so the recovered counters sample the keyed map broadly.
RateResult per_attempt_rate(std::int64_t trials, Forger forger, const VerifierConfig& config, std::uint64_t seed,
                            unsigned workers = 0);

/// Expected per-attempt acceptance for the forger under `config`.
double analytic_rate(Forger forger, const VerifierConfig& config);

}  // namespace otpforge::attack
