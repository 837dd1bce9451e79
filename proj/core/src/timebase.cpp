#include "otpforge/timebase.hpp"

namespace otpforge {

std::int64_t step_delta(SyncModel model, Instant later, Instant earlier) {
  if (later < earlier)
    throw std::invalid_argument("step_delta: arguments reversed (later < earlier)");
  return counter_at(model, later) - counter_at(model, earlier);
}

double delta_probability(std::int64_t d) {
  if (d < 0) throw std::invalid_argument("delta_probability: negative span");
  return static_cast<double>(d % kStepSeconds) / static_cast<double>(kStepSeconds);
}

Instant aligned_base_point(SyncModel model, Instant not_before) {
  const std::int64_t pos = (not_before.seconds() + model.phase()) % kStepSeconds;
  return not_before + (kStepSeconds - 1 - pos);
}

}  // namespace otpforge
