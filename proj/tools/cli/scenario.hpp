#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "otpforge/digitizer.hpp"
#include "otpforge/timebase.hpp"
#include "otpforge/verifier.hpp"

namespace otpforge::cli {

class ScenarioError : public std::runtime_error {
public:
  ScenarioError(std::size_t line, const std::string& what)
      : std::runtime_error("scenario line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct Actor {
  std::string id;
  TokenKey key;
  SyncModel sync;
  Instant t0;
  std::int64_t a0 = 0;
  std::string static_credential;
  int max_attempts = kDefaultMaxAttempts;
};

enum class Action { press, auth, forge };

struct ScenarioEvent {
  Instant t;
  Action action = Action::press;
  std::string actor;
  std::optional<std::string> otp;              // auth: overrides the displayed OTP
  std::optional<std::string> static_credential;  // auth/forge: overrides the actor's
  std::size_t line = 0;
};

/// First line: {"seed":..,"max_delay":..,"actors":[..]}; then one event per line.
struct Scenario {
  std::uint64_t seed = 1;
  std::optional<std::int64_t> max_delay = kDefaultMaxDelay;
  std::vector<Actor> actors;
  std::vector<ScenarioEvent> events;  // stable-sorted by t
};

/// Throws ScenarioError with the offending line number.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

struct ReplaySummary {
  std::int64_t presses = 0;
  std::int64_t redisplays = 0;
  std::int64_t auths = 0;
  std::int64_t accepted = 0;
  std::int64_t forgeries = 0;
  std::int64_t forgeries_accepted = 0;
  std::map<std::string, std::int64_t> reasons;
};

/// Runs the events against in-process tokens and a verifier in simulated
/// time. Writes the auth event log to `log` and one CSV row per auth or
/// forgery to `report`.
ReplaySummary run_scenario(const Scenario& scenario, std::ostream& log, std::ostream& report);

}  // namespace otpforge::cli
