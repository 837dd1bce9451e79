#include "otpforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace otpforge::analysis {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool is_combination(const std::string& s) {
  return s.size() == 6 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int parse_digit_field(const std::string& s) {
  if (s.size() != 1 || s[0] < '0' || s[0] > '9') throw std::invalid_argument("pattern must be one digit");
  return s[0] - '0';
}

std::int64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoll(s, &used);
  if (used != s.size() || v < 0) throw std::invalid_argument("bad count '" + s + "'");
  return v;
}

int lead_of(const std::string& combination) { return combination[0] - '0'; }

}  // namespace

std::vector<PressTrace> load_traces(std::istream& in) {
  std::vector<PressTrace> traces;
  std::map<std::string, std::size_t> by_label;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "table,index,combination,pattern")
        throw std::runtime_error("line " + std::to_string(lineno) + ": expected header table,index,combination,pattern");
      header = true;
      continue;
    }
    try {
      const auto f = split_csv(line);
      if (f.size() != 4) throw std::invalid_argument("expected 4 fields");
      if (!is_combination(f[2])) throw std::invalid_argument("combination must be 6 digits");
      auto [it, inserted] = by_label.try_emplace(f[0], traces.size());
      if (inserted) {
        PressTrace t;
        t.label = f[0];
        try {
          t.interval = parse_range(f[0]);
        } catch (const std::invalid_argument&) {
          t.interval = {};  // free-form label: no interval attached
        }
        traces.push_back(std::move(t));
      }
      PressTrace& t = traces[it->second];
      if (parse_count(f[1]) != static_cast<std::int64_t>(t.combinations.size()))
        throw std::invalid_argument("index out of sequence");
      t.combinations.push_back(f[2]);
      t.pattern.push_back(f[3].empty() ? std::nullopt : std::optional<int>(parse_digit_field(f[3])));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw std::runtime_error("empty trace input");
  return traces;
}

std::vector<PressTrace> load_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_traces(in);
}

void write_trace_csv(std::ostream& out, const PressTrace& trace) {
  for (std::size_t i = 0; i < trace.combinations.size(); ++i) {
    out << trace.label << ',' << i << ',' << trace.combinations[i] << ',';
    if (i < trace.pattern.size() && trace.pattern[i]) out << *trace.pattern[i];
    out << '\n';
  }
}

std::vector<int> recorded_pattern(const PressTrace& trace) {
  std::vector<int> out;
  for (std::size_t i = 1; i < trace.pattern.size(); ++i) {
    if (!trace.pattern[i]) throw std::invalid_argument("trace " + trace.label + ": missing pattern entry");
    out.push_back(*trace.pattern[i]);
  }
  return out;
}

std::vector<int> computed_pattern(const PressTrace& trace) {
  std::vector<int> out;
  for (std::size_t i = 1; i < trace.combinations.size(); ++i)
    out.push_back((lead_of(trace.combinations[i]) - lead_of(trace.combinations[i - 1]) + 10) % 10);
  return out;
}

std::vector<int> RunSummary::complete_runs() const {
  if (runs.empty()) return {};
  return {runs.begin() + 1, runs.end()};
}

RunSummary split_runs(std::span<const int> pattern, int terminator) {
  RunSummary s;
  s.minority_symbol = terminator;
  std::array<int, 10> freq{};
  int current = 0;
  for (int symbol : pattern) {
    ++current;
    if (symbol >= 0 && symbol <= 9) ++freq[static_cast<std::size_t>(symbol)];
    if (symbol == terminator) {
      s.runs.push_back(current);
      current = 0;
    }
  }
  s.tail = current;
  freq[static_cast<std::size_t>(terminator % 10)] = -1;
  s.majority_symbol = static_cast<int>(std::max_element(freq.begin(), freq.end()) - freq.begin());
  return s;
}

std::array<int, 2> pattern_symbols(double delta) {
  const auto steps = static_cast<int>(std::floor(delta / kStepSeconds));
  return {steps % 10, (steps + 1) % 10};
}

RunPrediction predict_runs(double delta) {
  if (!(delta > 0)) throw std::invalid_argument("predict_runs: interval must be positive");
  const double frac = std::fmod(delta, static_cast<double>(kStepSeconds));
  if (frac == 0) throw std::invalid_argument("predict_runs: multiple of 64 s has no terminator");
  const auto [small, large] = pattern_symbols(delta);
  const double rho = frac / kStepSeconds;
  RunPrediction p;
  double inv_q = 0;
  if (rho >= 0.5) {
    p.minority_symbol = small;
    p.majority_symbol = large;
    inv_q = kStepSeconds / (kStepSeconds - frac);
  } else {
    p.minority_symbol = large;
    p.majority_symbol = small;
    inv_q = kStepSeconds / frac;
  }
  p.min_run = static_cast<std::int64_t>(std::floor(inv_q));
  p.max_run = static_cast<std::int64_t>(std::ceil(inv_q));
  return p;
}

RunPrediction predict_runs(SecondRange range) {
  if (range.hi < range.lo) throw std::invalid_argument("predict_runs: empty range");
  const double step = kStepSeconds;
  const double mid = range.midpoint();
  if (std::fmod(mid, step) == 0) throw std::invalid_argument("predict_runs: range centred on a multiple of 64 s");
  // rho crossing 1/2 strictly inside the range swaps the minority symbol.
  const double half = std::floor((mid - step / 2) / step) * step + step / 2;
  for (double h : {half, half + step})
    if (h > range.lo && h < range.hi) throw std::invalid_argument("predict_runs: minority symbol changes in range");

  RunPrediction p = predict_runs(mid);
  auto q_at = [&](double d) {
    const double rho = std::fmod(d, step) / step;
    return std::min(rho, 1 - rho);
  };
  const double q_lo = q_at(range.lo);
  const double q_hi = q_at(range.hi);
  const bool boundary_inside = std::floor(range.lo / step) != std::floor(range.hi / step) || q_lo == 0 || q_hi == 0;
  const double q_max = std::max(q_lo, q_hi);
  const double q_min = boundary_inside ? 0.0 : std::min(q_lo, q_hi);
  p.min_run = static_cast<std::int64_t>(std::floor(1 / q_max));
  if (q_min == 0)
    p.max_run.reset();
  else
    p.max_run = static_cast<std::int64_t>(std::ceil(1 / q_min));
  return p;
}

DigitHistogram digit_histogram(std::span<const std::string> combinations) {
  DigitHistogram h{};
  std::unordered_set<std::string> seen;
  for (const auto& c : combinations) {
    if (!is_combination(c)) throw std::invalid_argument("digit_histogram: '" + c + "' is not 6 digits");
    if (!seen.insert(c).second) continue;
    for (std::size_t pos = 0; pos < 5; ++pos) ++h[pos][static_cast<std::size_t>(c[pos + 1] - '0')];
  }
  return h;
}

DigitHistogram digit_histogram(std::span<const PressTrace> traces) {
  std::vector<std::string> all;
  for (const auto& t : traces) all.insert(all.end(), t.combinations.begin(), t.combinations.end());
  return digit_histogram(std::span<const std::string>(all));
}

DigitHistogram load_digit_counts(std::istream& in) {
  DigitHistogram h{};
  std::string line;
  std::size_t lineno = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#' || line.rfind("position", 0) == 0) continue;
    const auto f = split_csv(line);
    const auto pos = std::string("bcdef").find(f.empty() ? "?" : f[0]);
    if (f.size() != 11 || f[0].size() != 1 || pos == std::string::npos)
      throw std::runtime_error("digit counts line " + std::to_string(lineno) + ": expected position,d0..d9");
    try {
      for (std::size_t d = 0; d < 10; ++d) h[pos][d] = parse_count(f[d + 1]);
    } catch (const std::exception& e) {
      throw std::runtime_error("digit counts line " + std::to_string(lineno) + ": " + e.what());
    }
    ++rows;
  }
  if (rows != 5) throw std::runtime_error("digit counts: expected 5 rows");
  return h;
}

std::array<double, 10> skew_model() {
  std::array<double, 10> m{};
  for (std::size_t d = 0; d < 10; ++d) m[d] = d <= 5 ? 1.0 / 8 : 1.0 / 16;
  return m;
}

std::array<double, 10> uniform_model() {
  std::array<double, 10> m{};
  m.fill(0.1);
  return m;
}

double chi_square_critical(int df, double alpha) {
  static constexpr std::array<double, 5> kAlphas{0.10, 0.05, 0.025, 0.01, 0.001};
  static constexpr double kTable[30][5] = {
      {2.706, 3.841, 5.024, 6.635, 10.828},    {4.605, 5.991, 7.378, 9.210, 13.816},
      {6.251, 7.815, 9.348, 11.345, 16.266},   {7.779, 9.488, 11.143, 13.277, 18.467},
      {9.236, 11.070, 12.833, 15.086, 20.515}, {10.645, 12.592, 14.449, 16.812, 22.458},
      {12.017, 14.067, 16.013, 18.475, 24.322}, {13.362, 15.507, 17.535, 20.090, 26.124},
      {14.684, 16.919, 19.023, 21.666, 27.877}, {15.987, 18.307, 20.483, 23.209, 29.588},
      {17.275, 19.675, 21.920, 24.725, 31.264}, {18.549, 21.026, 23.337, 26.217, 32.909},
      {19.812, 22.362, 24.736, 27.688, 34.528}, {21.064, 23.685, 26.119, 29.141, 36.123},
      {22.307, 24.996, 27.488, 30.578, 37.697}, {23.542, 26.296, 28.845, 32.000, 39.252},
      {24.769, 27.587, 30.191, 33.409, 40.790}, {25.989, 28.869, 31.526, 34.805, 42.312},
      {27.204, 30.144, 32.852, 36.191, 43.820}, {28.412, 31.410, 34.170, 37.566, 45.315},
      {29.615, 32.671, 35.479, 38.932, 46.797}, {30.813, 33.924, 36.781, 40.289, 48.268},
      {32.007, 35.172, 38.076, 41.638, 49.728}, {33.196, 36.415, 39.364, 42.980, 51.179},
      {34.382, 37.652, 40.646, 44.314, 52.620}, {35.563, 38.885, 41.923, 45.642, 54.052},
      {36.741, 40.113, 43.195, 46.963, 55.476}, {37.916, 41.337, 44.461, 48.278, 56.892},
      {39.087, 42.557, 45.722, 49.588, 58.301}, {40.256, 43.773, 46.979, 50.892, 59.703},
  };
  if (df < 1 || df > 30) throw std::out_of_range("chi_square_critical: df must lie in 1..30");
  for (std::size_t i = 0; i < kAlphas.size(); ++i)
    if (std::abs(kAlphas[i] - alpha) < 1e-12) return kTable[df - 1][i];
  throw std::out_of_range("chi_square_critical: unsupported alpha");
}

ChiSquareResult chi_square(std::span<const std::int64_t> counts, std::span<const double> model, double alpha) {
  if (counts.size() != model.size() || counts.size() < 2)
    throw std::invalid_argument("chi_square: counts and model must have the same size >= 2");
  const auto total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total <= 0) throw std::invalid_argument("chi_square: empty sample");
  const double mass = std::accumulate(model.begin(), model.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("chi_square: model must sum to 1");
  ChiSquareResult r;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = static_cast<double>(total) * model[i];
    if (expected <= 0) throw std::invalid_argument("chi_square: zero expected cell");
    const double diff = static_cast<double>(counts[i]) - expected;
    r.statistic += diff * diff / expected;
  }
  r.df = static_cast<int>(counts.size()) - 1;
  r.critical = chi_square_critical(r.df, alpha);
  r.reject = r.statistic > r.critical;
  return r;
}

std::string table_report(const PressTrace& trace) {
  std::ostringstream out;
  out << std::setw(5) << "i" << "  " << std::setw(6) << "comb." << "  " << "pattern\n";
  for (std::size_t i = 0; i < trace.combinations.size(); ++i) {
    out << std::setw(5) << i << "  " << trace.combinations[i] << "  ";
    if (i < trace.pattern.size() && trace.pattern[i]) out << *trace.pattern[i];
    out << '\n';
  }
  return out.str();
}

std::string histogram_report(const DigitHistogram& h) {
  std::ostringstream out;
  out << "  ";
  for (int d = 0; d < 10; ++d) out << std::setw(6) << d;
  out << '\n';
  for (std::size_t pos = 0; pos < 5; ++pos) {
    out << "bcdef"[pos] << ' ';
    for (auto c : h[pos]) out << std::setw(6) << c;
    out << '\n';
  }
  return out.str();
}

std::vector<int> fit_phases(std::span<const std::int64_t> intervals, std::span<const std::int64_t> steps) {
  if (intervals.size() != steps.size()) throw std::invalid_argument("fit_phases: size mismatch");
  std::vector<int> out;
  for (int phase = 0; phase < kStepSeconds; ++phase) {
    const SyncModel model(phase);
    Instant t(0);
    bool ok = true;
    for (std::size_t i = 0; i < intervals.size() && ok; ++i) {
      const Instant next = t + intervals[i];
      ok = step_delta(model, next, t) == steps[i];
      t = next;
    }
    if (ok) out.push_back(phase);
  }
  return out;
}

std::vector<IntervalRow> load_interval_table(std::istream& in) {
  std::vector<IntervalRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    const auto f = split_csv(line);
    try {
      if (f.size() != 5 || !is_combination(f[1])) throw std::invalid_argument("expected index,combination,interval,pattern,f");
      IntervalRow r;
      r.index = static_cast<int>(parse_count(f[0]));
      r.combination = f[1];
      if (!f[2].empty()) r.interval = parse_seconds(f[2], 0.0);
      if (!f[3].empty()) r.pattern = parse_digit_field(f[3]);
      if (!f[4].empty()) r.steps = parse_count(f[4]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("interval table line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<Otp> simulate_presses(const TokenKey& key, SyncModel sync, Instant start, double delta, std::int64_t count) {
  if (delta < kRedisplaySeconds) throw std::invalid_argument("simulate_presses: interval below 50 s only redisplays");
  Token token(key, sync, start, 0);
  std::vector<Otp> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t i = 0; i < count; ++i) {
    const auto offset = static_cast<std::int64_t>(std::floor(static_cast<double>(i) * delta));
    out.push_back(token.press(start + offset).otp);
  }
  return out;
}

PressTrace make_trace(std::string label, SecondRange interval, std::span<const Otp> otps) {
  PressTrace t;
  t.label = std::move(label);
  t.interval = interval;
  for (std::size_t i = 0; i < otps.size(); ++i) {
    t.combinations.push_back(otps[i].str());
    if (i == 0)
      t.pattern.emplace_back();
    else
      t.pattern.emplace_back((otps[i].lead - otps[i - 1].lead + 10) % 10);
  }
  return t;
}

}  // namespace otpforge::analysis
