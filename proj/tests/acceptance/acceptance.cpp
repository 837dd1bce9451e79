// One line per acceptance criterion: "ACn PASS|FAIL  detail".
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "otpforge/analysis.hpp"
#include "otpforge/attack.hpp"
#include "otpforge/token.hpp"
#include "otpforge/totp.hpp"
#include "otpforge/verifier.hpp"

using namespace otpforge;

namespace {

const TokenKey kKey = TokenKey::from_ascii("12345678901234567890");

std::string data_path(const std::string& rel) { return std::string(OTPFORGE_DATA_DIR) + "/" + rel; }

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "failed: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_set(const std::set<int>& s) {
  std::string out = "{";
  for (int v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

std::set<int> range_set(const analysis::RunPrediction& p) {
  std::set<int> s;
  if (!p.max_run) return s;
  for (auto r = p.min_run; r <= *p.max_run; ++r) s.insert(static_cast<int>(r));
  return s;
}

// AC1
Check run_structure() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto traces = analysis::load_traces(data_path("fixtures/press_traces.csv"));
  struct Case {
    std::string label;
    std::set<int> runs;
    std::array<int, 2> symbols;  // minority, majority
  };
  const std::vector<Case> cases{{"0:50+", {4, 5}, {0, 1}}, {"0:51+", {5, 6}, {0, 1}}, {"0:52+", {5, 6}, {0, 1}},
                                {"0:53+", {6, 7}, {0, 1}}, {"1:21+", {3, 4}, {2, 1}}, {"1:22+", {3, 4}, {2, 1}},
                                {"1:54+", {4, 5}, {1, 2}}};
  for (const auto& k : cases) {
    const auto range = parse_range(k.label);
    const auto pred = analysis::predict_runs(range.midpoint());
    c.require(range_set(pred) == k.runs, k.label + " predicted " + fmt_set(range_set(pred)));
    c.require(pred.minority_symbol == k.symbols[0] && pred.majority_symbol == k.symbols[1], k.label + " symbols");

    const auto* trace = &traces.front();
    for (const auto& t : traces)
      if (t.label == k.label) trace = &t;
    const auto observed = analysis::split_runs(analysis::recorded_pattern(*trace), pred.minority_symbol).complete_runs();
    for (int r : observed) c.require(k.runs.contains(r), k.label + " fixture run " + std::to_string(r));

    std::set<int> simulated;
    for (int phase = 0; phase < 64; ++phase) {
      const auto otps = analysis::simulate_presses(kKey, SyncModel(phase), Instant(1000 + phase), range.midpoint(), 1000);
      const auto pattern = lead_pattern(otps);
      for (int s : pattern) c.require(s == k.symbols[0] || s == k.symbols[1], k.label + " stray symbol");
      for (int r : analysis::split_runs(pattern, pred.minority_symbol).complete_runs()) simulated.insert(r);
    }
    c.require(std::includes(k.runs.begin(), k.runs.end(), simulated.begin(), simulated.end()),
              k.label + " simulated " + fmt_set(simulated));
  }
  const double secs = seconds_since(start);
  c.require(secs < 10, "runtime " + std::to_string(secs) + " s");
  if (c.ok) c.detail << "7 intervals x 64 phases x 1000 presses within predicted runs (" << secs << " s)";
  return c;
}

// AC2
Check sync_algebra() {
  Check c;
  std::mt19937_64 rng(2024);
  std::int64_t pairs = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    const SyncModel m(seq % 64);
    std::vector<Instant> t{Instant(static_cast<std::int64_t>(rng() % 1000000))};
    const int n = 2 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) t.push_back(t.back() + static_cast<std::int64_t>(rng() % 2000));
    std::int64_t sum = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const auto d = t[i] - t[i - 1];
      const auto v = step_delta(m, t[i], t[i - 1]);
      if (v != d / 64 && v != (d + 63) / 64) c.require(false, "range violated");
      sum += v;
      ++pairs;
    }
    if (sum != step_delta(m, t.back(), t.front())) c.require(false, "additivity violated");
  }
  std::ifstream in(data_path("fixtures/random_intervals.csv"));
  std::vector<std::int64_t> intervals, steps;
  for (const auto& r : analysis::load_interval_table(in))
    if (r.interval) {
      intervals.push_back(*r.interval);
      steps.push_back(*r.steps);
    }
  const auto phases = analysis::fit_phases(intervals, steps);
  c.require(!phases.empty(), "no phase reproduces the random-interval table");
  std::vector<std::int64_t> t{0};
  for (auto d : intervals) t.push_back(t.back() + d);
  std::int64_t f = -1;
  if (!phases.empty()) f = step_delta(SyncModel(phases.front()), Instant(t[11]), Instant(t[5]));
  c.require(f == 29, "f(t11,t5) = " + std::to_string(f));
  if (c.ok)
    c.detail << "10^4 sequences (" << pairs << " steps) additive and in {floor,ceil}; phases " << phases.front() << ".."
             << phases.back() << " fit, f(t11,t5)=29 over " << (t[11] - t[5]) << " s";
  return c;
}

// AC3
Check digit_law() {
  Check c;
  // A token with a seeded random key pressed once per step: 10^5 fresh OTPs.
  auto rng = attack::stream_rng(3, 0xAC3, 0);
  const auto key = attack::random_key(rng);
  const int n = 100000;
  const auto otps = analysis::simulate_presses(key, SyncModel(0), Instant(0), 64.0, n);
  std::array<std::array<std::int64_t, 10>, 5> counts{};
  for (const auto& otp : otps)
    for (std::size_t p = 0; p < 5; ++p) ++counts[p][otp.body[p]];
  double worst = 0, max_generated = 0;
  for (std::size_t p = 0; p < 5; ++p) {
    for (int d = 0; d < 10; ++d) {
      const double dev = std::abs(counts[p][d] / double(n) - (d <= 5 ? 0.125 : 0.0625));
      worst = std::max(worst, dev);
    }
    const auto skew = analysis::chi_square(counts[p], analysis::skew_model());
    max_generated = std::max(max_generated, skew.statistic);
    c.require(!skew.reject, std::string("generated skew rejected at ") + "bcdef"[p]);
    c.require(analysis::chi_square(counts[p], analysis::uniform_model()).reject, "generated uniform accepted");
  }
  c.require(worst <= 0.01, "frequency deviation " + std::to_string(worst));

  // Reported only: the RFC test key over counters 0..n-1.
  std::ostringstream rfc;
  for (std::size_t p = 0; p < 5; ++p) {
    std::array<std::int64_t, 10> h{};
    for (int i = 0; i < n; ++i) ++h[body(kKey, i)[p]];
    rfc << (p ? " " : "") << std::fixed << std::setprecision(2)
        << analysis::chi_square(h, analysis::skew_model()).statistic;
  }

  std::ifstream in(data_path("fixtures/digit_counts.csv"));
  const auto published = analysis::load_digit_counts(in);
  double max_skew = 0, min_uniform = 1e9;
  for (std::size_t p = 0; p < 5; ++p) {
    const auto a = analysis::chi_square(published[p], analysis::skew_model());
    const auto b = analysis::chi_square(published[p], analysis::uniform_model());
    c.require(!a.reject && b.reject, std::string("published row ") + "bcdef"[p]);
    max_skew = std::max(max_skew, a.statistic);
    min_uniform = std::min(min_uniform, b.statistic);
  }
  if (c.ok)
    c.detail << "max |freq-law| " << worst << ", generated chi2 skew <= " << max_generated
             << "; published counts chi2 skew <= " << max_skew << ", uniform >= " << min_uniform
             << " (crit 16.919); RFC key counters 0..99999 skew chi2 b..f: " << rfc.str();
  return c;
}

// AC4
Check verifier_completeness(std::int64_t& comparisons, std::int64_t& attempts) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  for (int phase = 0; phase < 64; ++phase) {
    const SyncModel sync(phase);
    const Instant t0 = aligned_base_point(sync, Instant(500));
    for (std::int64_t delay = 0; delay < 480; ++delay) {
      Token tok(kKey, sync, t0, 3);
      auto rec = provision("c", kKey, t0, 3, "pw");
      const Instant gen = t0 + static_cast<std::int64_t>(1 + rng() % 5000000);
      const auto otp = tok.press(gen).otp;
      const auto out = verify(rec, otp, gen + delay);
      comparisons += out.comparisons;
      ++attempts;
      if (!out.accepted() || *out.recovered_a != tok.counter())
        c.require(false, "phase " + std::to_string(phase) + " delay " + std::to_string(delay));
    }
    for (std::int64_t delay = 480; delay < 576; ++delay) {
      Token tok(kKey, sync, t0, 3);
      auto rec = provision("c", kKey, t0, 3, "pw");
      const Instant gen = t0 + 64 * 100;  // boundary-aligned: estimate equals generation time
      const auto out = verify(rec, tok.press(gen).otp, gen + delay);
      if (out.reason != VerifyReason::stale)
        c.require(false, "aligned phase " + std::to_string(phase) + " delay " + std::to_string(delay) + " not stale");
    }
    Token tok(kKey, sync, t0, 3);
    auto rec = provision("c", kKey, t0, 3, "pw");
    const Instant gen = t0 + 64 * 100;
    c.require(verify(rec, tok.press(gen).otp, gen + parse_seconds("7:59+")).accepted(), "7:59+ rejected");
  }
  const double secs = seconds_since(start);
  c.require(secs < 10, "runtime " + std::to_string(secs) + " s");
  if (c.ok) c.detail << "64 phases x delays 0..479 accepted with exact A; aligned 480..575 stale (" << secs << " s)";
  return c;
}

// AC5
Check replay_and_repetition() {
  Check c;
  for (int phase = 0; phase < 64; ++phase) {
    const SyncModel sync(phase);
    const Instant t0 = aligned_base_point(sync, Instant(0));
    Token tok(kKey, sync, t0, 0);
    auto rec = provision("c", kKey, t0, 0, "pw");
    // a fresh press inside the same step repeats the OTP
    const Instant a = t0 + 64 * 10 + 1;
    const auto first = tok.press(a);
    const auto second = tok.press(a + 55);
    c.require(second.kind == PressKind::fresh && second.otp == first.otp, "no repetition at phase " + std::to_string(phase));
    c.require(verify(rec, first.otp, a + 2).accepted(), "genuine rejected");
    c.require(verify(rec, second.otp, a + 57).reason == VerifyReason::replay, "repeated OTP accepted");
    c.require(verify(rec, first.otp, a + 60).reason == VerifyReason::replay, "replay accepted");
    Instant t = a + 120;
    for (int i = 0; i < 100; ++i) {
      tok.press(t);
      t = t + 61;
    }
    const auto next = tok.press(t + 70).otp;
    const auto out = verify(rec, next, t + 80);
    c.require(out.accepted() && *out.recovered_a == tok.counter(), "login after 100 presses failed");
  }
  if (c.ok) c.detail << "64 phases: repeated and replayed OTPs rejected; 100 idle presses harmless";
  return c;
}

// AC6
Check attack_rate() {
  Check c;
  const std::int64_t trials = 10000000;
  const auto cfg = VerifierConfig::single_attempt_model();
  const auto skew = attack::per_attempt_rate(trials, attack::Forger::skewed, cfg, 606);
  const auto uni = attack::per_attempt_rate(trials, attack::Forger::uniform, cfg, 607);
  const double p = 1 / attack::kSkewedSpace;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  const double pu = 1e-5;
  const double sigma_u = std::sqrt(pu * (1 - pu) / trials);
  c.require(std::abs(skew.rate() - p) <= 3 * sigma, "skewed rate " + std::to_string(skew.rate()));
  c.require(std::abs(uni.rate() - pu) <= 3 * sigma_u, "uniform rate " + std::to_string(uni.rate()));
  c.require(uni.rate() < skew.rate(), "uniform variant not lower");
  c.require(skew.comparisons == skew.trials, "more than one comparison per forgery");
  // lead digit does not matter: acceptance by lead vs trials by lead
  double chi = 0;
  for (int l = 0; l < 10; ++l) {
    const double expected = skew.accepted * double(skew.trials_by_lead[l]) / double(skew.trials);
    chi += std::pow(skew.accepted_by_lead[l] - expected, 2) / expected;
  }
  c.require(chi <= analysis::chi_square_critical(9, 0.05), "acceptance depends on lead, chi2 " + std::to_string(chi));
  if (c.ok)
    c.detail << "skewed " << skew.accepted << "/" << trials << " = " << skew.rate() << " (target " << p << " +- "
             << 3 * sigma << "); uniform " << uni.rate() << "; lead chi2 " << chi;
  return c;
}

// AC7
Check success_table() {
  Check c;
  const std::array<double, 6> expected{0.0036, 0.0072, 0.0109, 0.0145, 0.0181, 0.0217};
  std::ostringstream got;
  for (int r = 1; r <= 6; ++r) {
    const double v = attack::truncate_places(attack::p_success(120 * r), 4);
    got << (r > 1 ? " " : "") << v;
    c.require(std::abs(v - expected[r - 1]) < 1e-12, "r=" + std::to_string(r));
  }
  if (c.ok) c.detail << "p(120r), r=1..6: " << got.str();
  return c;
}

// AC8
Check campaign() {
  Check c;
  attack::CampaignConfig cfg;
  cfg.customers = 10000;
  cfg.max_attempts = 3;
  cfg.years = 1;
  cfg.seed = 2013;
  const auto a = attack::run_campaign(cfg);
  cfg.workers = 3;
  const auto b = attack::run_campaign(cfg);
  c.require(a.csv() == b.csv(), "not deterministic across worker counts");
  c.require(std::abs(a.expected - 109.2636) < 1e-3, "expected " + std::to_string(a.expected));
  c.require(std::abs(a.compromised - a.expected) <= 3 * a.stddev, "compromised " + std::to_string(a.compromised));
  c.require(a.genuine_rejects == 0, "genuine logins rejected");
  if (c.ok)
    c.detail << "compromised " << a.compromised << " vs N p(360) = " << a.expected << " +- " << 3 * a.stddev
             << " (3 sd), " << a.attempts << " forgeries";
  return c;
}

// AC9
Check baseline(std::int64_t sync_comparisons, std::int64_t sync_attempts) {
  Check c;
  const totp::TotpParams params{Instant(0), 30, 6};
  const int w = totp::window_for_delay(480, 30);
  c.require(w == 16, "window " + std::to_string(w));
  int worst = 0;
  for (std::int64_t gen = 100000; gen < 100030; ++gen)
    for (std::int64_t d = 0; d <= 480; ++d) {
      const auto code = totp::hotp(kKey, totp::totp_counter(Instant(gen), params));
      const auto v = totp::totp_verify(kKey, params, code, Instant(gen + d), w);
      if (!v.accepted) c.require(false, "totp rejected delay " + std::to_string(d));
      worst = std::max(worst, v.comparisons);
    }
  c.require(worst == 17, "totp worst case " + std::to_string(worst));
  c.require(sync_attempts > 0 && sync_comparisons == sync_attempts, "synchronized verifier used more than 1");
  if (c.ok)
    c.detail << "TOTP w=16 needs up to " << worst << " comparisons; synchronized verifier " << sync_comparisons << "/"
             << sync_attempts << " = 1 per attempt";
  return c;
}

// AC10
Check hotp_vectors() {
  Check c;
  const std::array<const char*, 10> published{"755224", "287082", "359152", "969429", "338314",
                                              "254676", "287922", "162583", "399871", "520489"};
  std::map<std::int64_t, std::string> oracle;
  std::ifstream in(data_path("vectors/hotp_vectors.txt"));
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key, code;
    std::int64_t counter;
    ss >> key >> counter >> code;
    if (key == kKey.hex()) oracle[counter] = code;
  }
  for (int i = 0; i < 10; ++i) {
    c.require(oracle.count(i) && oracle[i] == published[i], "oracle disagrees at " + std::to_string(i));
    c.require(totp::hotp(kKey, i) == published[i], "hotp disagrees at " + std::to_string(i));
  }
  if (c.ok) c.detail << "counters 0..9 match the published values and the reference oracle";
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const std::function<Check()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    if (!c.ok) ++failures;
    std::printf("%s %s  %s [%.1f s]\n", id, c.ok ? "PASS" : "FAIL", c.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
  };
  std::int64_t comparisons = 0, attempts = 0;
  report("AC1", run_structure);
  report("AC2", sync_algebra);
  report("AC3", digit_law);
  report("AC4", [&] { return verifier_completeness(comparisons, attempts); });
  report("AC5", replay_and_repetition);
  report("AC6", attack_rate);
  report("AC7", success_table);
  report("AC8", campaign);
  report("AC9", [&] { return baseline(comparisons, attempts); });
  report("AC10", hotp_vectors);
  return failures == 0 ? 0 : 1;
}
