#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace otpforge {

/// Offset added for a trailing "+" ("0:50+" is any moment in [50, 51)).
inline constexpr double kDefaultPlusOffset = 0.5;

/**
 * Parses a duration written either as raw seconds ("50", "50.5") or in the
 * stopwatch notation "m:ss" / "m:ss+" used for the press experiments.
 * A trailing "+" adds `plus_offset` (must lie in [0, 1)).
 * Throws std::invalid_argument on malformed input.
 */
double parse_duration(std::string_view text, double plus_offset = kDefaultPlusOffset);

/// parse_duration truncated to the whole second the token observes.
std::int64_t parse_seconds(std::string_view text, double plus_offset = kDefaultPlusOffset);

/// Half-open second range [lo, hi) a label such as "1:21+" denotes; a label
/// without "+" denotes the single instant (lo == hi).
struct SecondRange {
  double lo = 0;
  double hi = 0;
  double midpoint() const { return (lo + hi) / 2; }
};
SecondRange parse_range(std::string_view label);

/// "m:ss" rendering of a whole number of seconds.
std::string format_mss(std::int64_t seconds);

}  // namespace otpforge
