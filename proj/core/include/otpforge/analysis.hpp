#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otpforge/time_notation.hpp"
#include "otpforge/token.hpp"

namespace otpforge::analysis {

/// A press experiment: combinations recorded at a fixed press interval.
struct PressTrace {
  std::string label;     // e.g. "0:50+"
  SecondRange interval;  // seconds between presses the label denotes
  std::vector<std::string> combinations;
  std::vector<std::optional<int>> pattern;  // as recorded; entry 0 usually empty
};

/// Reads `table,index,combination,pattern` CSV (header required). Rows are
/// grouped by table in order of first appearance. Throws std::runtime_error
/// naming the line on malformed input.
std::vector<PressTrace> load_traces(std::istream& in);
std::vector<PressTrace> load_traces(const std::string& path);
void write_trace_csv(std::ostream& out, const PressTrace& trace);

/// Recorded pattern column (entries 1..n-1).
std::vector<int> recorded_pattern(const PressTrace& trace);
/// Pattern recomputed from the combinations' lead digits.
std::vector<int> computed_pattern(const PressTrace& trace);

struct RunSummary {
  std::vector<int> runs;  // lengths of terminator-ended segments, in order
  int tail = 0;           // symbols after the last terminator
  int minority_symbol = 0;
  int majority_symbol = 0;

  /// runs without the first one, whose start depends on where recording began.
  std::vector<int> complete_runs() const;
};

/// Cuts the pattern after every `terminator` (which stays in its segment).
RunSummary split_runs(std::span<const int> pattern, int terminator);

/// Run lengths a fixed press interval can produce: runs of the
/// majority symbol closed by the minority one.
struct RunPrediction {
  int minority_symbol = 0;
  int majority_symbol = 0;
  std::int64_t min_run = 0;
  std::optional<std::int64_t> max_run;  // unset: unbounded

  bool contains(std::int64_t run) const { return run >= min_run && (!max_run || run <= *max_run); }
};

/// Exact interval `delta` seconds. The larger step occurs with density
/// rho = (delta mod 64)/64; the rarer symbol has density q = min(rho, 1-rho)
/// and runs lie in {floor(1/q), ceil(1/q)}. Throws for multiples of 64.
RunPrediction predict_runs(double delta);
/// Union of predict_runs over [lo, hi] (unbounded if a multiple of 64 is
/// inside). Throws if the minority symbol changes within the range.
RunPrediction predict_runs(SecondRange range);

/// Step symbols a press interval can produce: floor(d/64), floor(d/64)+1 (mod 10).
std::array<int, 2> pattern_symbols(double delta);

/// Per position b..f, per digit 0..9.
using DigitHistogram = std::array<std::array<std::int64_t, 10>, 5>;

/// Counts the five trailing digits over distinct combinations across all
/// traces (each combination counted once).
DigitHistogram digit_histogram(std::span<const PressTrace> traces);
DigitHistogram digit_histogram(std::span<const std::string> combinations);

/// Reads `position,d0..d9` CSV (five rows b..f).
DigitHistogram load_digit_counts(std::istream& in);

/// P(d) = 1/8 for 0..5 and 1/16 for 6..9.
std::array<double, 10> skew_model();
std::array<double, 10> uniform_model();

struct ChiSquareResult {
  double statistic = 0;
  int df = 0;
  double critical = 0;
  bool reject = false;
};

/// Upper-tail critical value for df in 1..30 and alpha in
/// {0.10, 0.05, 0.025, 0.01, 0.001}. Throws std::out_of_range otherwise.
double chi_square_critical(int df, double alpha);

/// Pearson goodness of fit, df = cells - 1. Throws std::invalid_argument on
/// an empty sample, a model not summing to 1, or a zero expected cell.
ChiSquareResult chi_square(std::span<const std::int64_t> counts, std::span<const double> model, double alpha = 0.05);

/// Three-column text table (index, combination, pattern digit).
std::string table_report(const PressTrace& trace);

/// Digit count table: one row per position b..f.
std::string histogram_report(const DigitHistogram& h);

/// Phases in [0, 64) under which presses separated by `intervals` seconds
/// produce exactly the step counts `steps`.
std::vector<int> fit_phases(std::span<const std::int64_t> intervals, std::span<const std::int64_t> steps);

/// One row of the random-interval table.
struct IntervalRow {
  int index = 0;
  std::string combination;
  std::optional<std::int64_t> interval;  // seconds since the previous press
  std::optional<int> pattern;
  std::optional<std::int64_t> steps;
};
std::vector<IntervalRow> load_interval_table(std::istream& in);

/// Fresh OTPs from presses at start + floor(i * delta), i = 0..count-1.
/// Requires delta >= 50 so every press generates.
std::vector<Otp> simulate_presses(const TokenKey& key, SyncModel sync, Instant start, double delta, std::int64_t count);

/// Trace built from simulated OTPs, pattern column filled from lead digits.
PressTrace make_trace(std::string label, SecondRange interval, std::span<const Otp> otps);

}  // namespace otpforge::analysis
