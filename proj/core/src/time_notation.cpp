#include "otpforge/time_notation.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace otpforge {
namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
    throw std::invalid_argument("bad time value: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

double parse_duration(std::string_view text, double plus_offset) {
  if (plus_offset < 0 || plus_offset >= 1)
    throw std::invalid_argument("plus offset must lie in [0, 1)");
  std::string_view s = text;
  bool plus = false;
  if (!s.empty() && s.back() == '+') {
    plus = true;
    s.remove_suffix(1);
  }
  double value = 0;
  if (auto colon = s.find(':'); colon != std::string_view::npos) {
    const auto minutes = parse_int(s.substr(0, colon), text);
    const auto secs_part = s.substr(colon + 1);
    if (secs_part.size() != 2) throw std::invalid_argument("bad time value: '" + std::string(text) + "'");
    const auto secs = parse_int(secs_part, text);
    if (secs >= 60) throw std::invalid_argument("seconds field >= 60 in '" + std::string(text) + "'");
    value = static_cast<double>(minutes * 60 + secs);
  } else {
    if (s.empty()) throw std::invalid_argument("empty time value");
    std::size_t used = 0;
    try {
      value = std::stod(std::string(s), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad time value: '" + std::string(text) + "'");
    }
    if (used != s.size() || !std::isfinite(value) || value < 0)
      throw std::invalid_argument("bad time value: '" + std::string(text) + "'");
  }
  return plus ? value + plus_offset : value;
}

std::int64_t parse_seconds(std::string_view text, double plus_offset) {
  return static_cast<std::int64_t>(std::floor(parse_duration(text, plus_offset)));
}

SecondRange parse_range(std::string_view label) {
  const double lo = parse_duration(label, 0.0);
  const bool plus = !label.empty() && label.back() == '+';
  return {lo, plus ? lo + 1.0 : lo};
}

std::string format_mss(std::int64_t seconds) {
  const auto m = seconds / 60;
  const auto s = seconds % 60;
  return std::to_string(m) + ":" + (s < 10 ? "0" : "") + std::to_string(s);
}

}  // namespace otpforge
