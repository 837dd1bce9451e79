#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace otpforge {

/// Length of one synchronization step, in seconds.
inline constexpr std::int64_t kStepSeconds = 64;

/// Simulation time in whole seconds since the scenario epoch.
class Instant {
public:
  constexpr Instant() = default;
  constexpr explicit Instant(std::int64_t seconds) : seconds_(seconds) {
    if (seconds < 0) throw std::invalid_argument("Instant: negative time");
  }

  constexpr std::int64_t seconds() const { return seconds_; }

  constexpr Instant operator+(std::int64_t delta) const { return Instant(seconds_ + delta); }
  constexpr std::int64_t operator-(Instant other) const { return seconds_ - other.seconds_; }

  friend constexpr auto operator<=>(Instant, Instant) = default;

private:
  std::int64_t seconds_ = 0;
};

/**
 * The token/server step counter.
 *
 * Both sides count 64-second boundaries on a grid that is offset from the
 * scenario epoch by `phase` seconds. The step count between two instants
 * then takes one of two values depending on where the instants fall on the
 * grid, and it is additive over any sequence of instants.
 */
class SyncModel {
public:
  constexpr SyncModel() = default;
  constexpr explicit SyncModel(int phase) : phase_(phase) {
    if (phase < 0 || phase >= kStepSeconds)
      throw std::invalid_argument("SyncModel: phase must lie in [0, 64)");
  }

  constexpr int phase() const { return phase_; }

  friend constexpr bool operator==(SyncModel, SyncModel) = default;

private:
  int phase_ = 0;
};

/// floor((t + phase) / 64).
constexpr std::int64_t counter_at(SyncModel model, Instant t) {
  return (t.seconds() + model.phase()) / kStepSeconds;
}

/// Number of step boundaries crossed going from `earlier` to `later`.
/// Lies in {floor(d/64), ceil(d/64)} for d = later - earlier.
/// Throws std::invalid_argument when `later` precedes `earlier`.
std::int64_t step_delta(SyncModel model, Instant later, Instant earlier);

/// Probability over a uniform phase that step_delta over a span of `d`
/// seconds takes its larger value ceil(d/64); (d mod 64) / 64.
double delta_probability(std::int64_t d);

/// Smallest instant >= `not_before` that is the last second of a step on
/// the model's grid. Provisioning a token at such a base point makes
/// t0 + 64 * step_delta(t, t0) the latest second consistent with the
/// counter, so the verifier's estimate never precedes the true generation.
Instant aligned_base_point(SyncModel model, Instant not_before);

}  // namespace otpforge
