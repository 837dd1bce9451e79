#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "otpforge/attack.hpp"
#include "otpforge/config.hpp"
#include "otpforge/digitizer.hpp"
#include "otpforge/timebase.hpp"

namespace otpforge::cli {

enum class TableFormat { text, csv };

struct PressOptions {
  TokenKey key;
  SyncModel sync;
  Instant t0;
  std::int64_t a0 = 0;
  std::vector<Instant> schedule;
  std::string label = "press";
  TableFormat format = TableFormat::text;
};

/// start + floor(i * interval) for i in [0, count).
std::vector<Instant> fixed_schedule(Instant start, double interval, std::int64_t count);
/// Comma-separated instants (seconds or m:ss). Throws std::invalid_argument if unsorted.
std::vector<Instant> parse_schedule(const std::string& text);

/// Index, combination and pattern digit per fresh OTP. In text form
/// redisplays appear as "-" rows; the CSV form lists fresh OTPs only and
/// is readable by cmd_analyze.
void cmd_press(const PressOptions& opts, std::ostream& out);

struct AttackOptions {
  attack::CampaignConfig campaign;
  std::optional<std::string> out_dir;  // writes campaign.csv and campaign.txt
  bool analytic_only = false;          // success table for r = 1..6
};
void cmd_attack(const AttackOptions& opts, std::ostream& out);

struct AnalyzeOptions {
  std::vector<std::string> inputs;          // trace CSV files
  std::vector<std::string> interval_tables; // index,combination,interval,pattern,f CSV; adds to the histogram
  std::optional<std::string> digit_counts;  // position,d0..d9 CSV tested instead of the traces' histogram
  double alpha = 0.05;
};
/// Run structure per trace, digit histogram and chi-square against the
/// skewed and uniform models. Throws on empty or malformed input.
void cmd_analyze(const AnalyzeOptions& opts, std::ostream& out);

struct ProvisionOptions {
  std::string snapshot;
  std::string id;
  std::string static_credential;
  std::optional<std::string> key_hex;
  std::optional<int> phase;
  Instant not_before;
  std::int64_t a0 = 0;
  int max_attempts = 3;
  std::uint64_t seed = 1;
};
/// Adds a record to the snapshot (created if missing) and prints the token
/// parameters needed to emulate it.
void cmd_provision(const ProvisionOptions& opts, std::ostream& out);

/// HOTP and body values for counters [0, count).
void cmd_vectors(const TokenKey& key, std::int64_t count, std::ostream& out);

/// Settings from the file named by OTPFORGE_CONFIG, or defaults.
ServiceSettings settings_from_env();

}  // namespace otpforge::cli
