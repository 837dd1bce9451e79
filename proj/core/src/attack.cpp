#include "otpforge/attack.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace otpforge::attack {
namespace {

constexpr std::int64_t kYearSeconds = 365LL * 24 * 3600;

Otp forge_with(Rng& rng, int max_digit) {
  std::uniform_int_distribution<int> lead(0, 9);
  std::uniform_int_distribution<int> digit(0, max_digit);
  Otp otp;
  otp.lead = static_cast<std::uint8_t>(lead(rng));
  std::array<std::uint8_t, OtpBody::kDigits> d{};
  for (auto& x : d) x = static_cast<std::uint8_t>(digit(rng));
  otp.body = OtpBody(d);
  return otp;
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end, slot) over [0, n) split into `workers` contiguous slices.
template <typename Body>
void parallel_slices(std::int64_t n, unsigned workers, Body body) {
  workers = static_cast<unsigned>(std::clamp<std::int64_t>(n, 1, workers));
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (unsigned w = 0; w < workers; ++w) {
    const std::int64_t begin = n * w / workers;
    const std::int64_t end = n * (w + 1) / workers;
    threads.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

CustomerOutcome simulate_customer(const CampaignConfig& cfg, std::int64_t index) {
  Rng rng = stream_rng(cfg.seed, 0xC0FFEE, static_cast<std::uint64_t>(index));
  const TokenKey key = random_key(rng);
  const SyncModel sync(static_cast<int>(rng() % kStepSeconds));
  const Instant t0 = aligned_base_point(sync, Instant(static_cast<std::int64_t>(rng() % 86400)));
  const std::int64_t a0 = static_cast<std::int64_t>(rng() % 1000);

  Token token(key, sync, t0, a0);
  CustomerRecord record = provision("c" + std::to_string(index), key, t0, a0, "static", cfg.max_attempts);

  const std::int64_t auths = cfg.auth_count();
  const std::int64_t spacing = kYearSeconds / std::max(1, cfg.auths_per_year);
  const int forgeries = cfg.forgeries_per_auth();
  std::uniform_int_distribution<std::int64_t> jitter(0, 3600);
  std::uniform_int_distribution<std::int64_t> typing_delay(5, 60);

  CustomerOutcome out;
  out.index = index;
  for (std::int64_t k = 0; k < auths && !out.compromised; ++k) {
    if (record.locked) {
      reset_lockout(record);  // the customer calls the help desk
      ++out.lockouts;
    }
    const Instant login = t0 + (1 + k * spacing + jitter(rng));
    const Otp genuine = token.press(login).otp;
    if (!verify(record, genuine, login + typing_delay(rng), cfg.verifier).accepted()) ++out.genuine_rejects;

    // Wait out the ten-step recovery window so no forged lead maps onto an
    // already-accepted counter.
    Instant at = login + 11 * kStepSeconds;
    for (int j = 0; j < forgeries; ++j) {
      at = at + 67;
      ++out.attempts;
      if (verify(record, forge(rng), at, cfg.verifier).accepted()) {
        out.compromised = true;
        out.compromised_at_auth = k;
        break;
      }
    }
  }
  return out;
}

}  // namespace

Otp forge(Rng& rng) { return forge_with(rng, 5); }
Otp forge_uniform(Rng& rng) { return forge_with(rng, 9); }

double p_success(std::int64_t x) {
  if (x < 0) throw std::invalid_argument("p_success: negative attempt count");
  return -std::expm1(static_cast<double>(x) * std::log1p(-1.0 / kSkewedSpace));
}

Rng stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

TokenKey random_key(Rng& rng) {
  std::vector<std::uint8_t> bytes(20);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(rng() & 0xFF);
  return TokenKey(std::move(bytes));
}

double truncate_places(double value, int places) {
  const double scale = std::pow(10.0, places);
  // The nudge keeps values like 0.0109000000 from truncating one unit low.
  return std::floor(value * scale + 1e-9) / scale;
}

std::string success_table(int r_min, int r_max, int auths_per_year) {
  if (r_min < 1 || r_max < r_min) throw std::invalid_argument("success_table: bad r range");
  std::ostringstream out;
  const std::string label = "p(" + std::to_string(auths_per_year) + "r)";
  const auto width = static_cast<int>(label.size()) + 2;
  out << std::left << std::setw(width) << "r" << std::right;
  for (int r = r_min; r <= r_max; ++r) out << std::setw(8) << r;
  out << '\n' << std::left << std::setw(width) << label << std::right << std::fixed << std::setprecision(4);
  for (int r = r_min; r <= r_max; ++r)
    out << std::setw(8) << truncate_places(p_success(static_cast<std::int64_t>(auths_per_year) * r), 4);
  out << '\n';
  return out.str();
}

std::string_view to_string(Strategy s) { return s == Strategy::burst ? "burst" : "stealth"; }

Strategy parse_strategy(std::string_view s) {
  if (s == "burst") return Strategy::burst;
  if (s == "stealth") return Strategy::stealth;
  throw std::invalid_argument("strategy must be 'burst' or 'stealth'");
}

int CampaignConfig::forgeries_per_auth() const {
  if (attempts_per_auth) return *attempts_per_auth;
  return strategy == Strategy::burst ? max_attempts : max_attempts - 1;
}

std::int64_t CampaignConfig::auth_count() const {
  return static_cast<std::int64_t>(std::llround(static_cast<double>(auths_per_year) * years));
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.customers <= 0 || cfg.auths_per_year <= 0 || cfg.max_attempts <= 0 || cfg.years <= 0)
    throw std::invalid_argument("campaign: counts must be positive");
  if (cfg.forgeries_per_auth() < 0) throw std::invalid_argument("campaign: negative attempts per login");

  CampaignReport report;
  report.config = cfg;
  report.per_customer.resize(static_cast<std::size_t>(cfg.customers));
  parallel_slices(cfg.customers, resolve_workers(cfg.workers), [&](std::int64_t begin, std::int64_t end, unsigned) {
    for (std::int64_t i = begin; i < end; ++i) report.per_customer[static_cast<std::size_t>(i)] = simulate_customer(cfg, i);
  });

  for (const auto& c : report.per_customer) {
    report.attempts += c.attempts;
    report.compromised += c.compromised ? 1 : 0;
    report.genuine_rejects += c.genuine_rejects;
  }
  const double p = p_success(cfg.auth_count() * cfg.forgeries_per_auth());
  const auto n = static_cast<double>(cfg.customers);
  report.expected = n * p;
  report.stddev = std::sqrt(n * p * (1 - p));
  return report;
}

std::string CampaignReport::csv() const {
  std::ostringstream out;
  out << "customers,r,strategy,auths,attempts_per_auth,attempts,compromised,expected,stddev,seed\n";
  out << config.customers << ',' << config.max_attempts << ',' << to_string(config.strategy) << ','
      << config.auth_count() << ',' << config.forgeries_per_auth() << ',' << attempts << ',' << compromised << ','
      << std::fixed << std::setprecision(4) << expected << ',' << stddev << ',' << config.seed << '\n';
  return out.str();
}

std::string CampaignReport::table() const {
  std::ostringstream out;
  const std::int64_t x = config.auth_count() * config.forgeries_per_auth();
  out << "customers N          " << config.customers << '\n'
      << "allowed attempts r   " << config.max_attempts << " (" << to_string(config.strategy) << ", "
      << config.forgeries_per_auth() << " forgeries per login)\n"
      << "logins per customer  " << config.auth_count() << '\n'
      << "forgeries submitted  " << attempts << '\n'
      << std::fixed << std::setprecision(4) << "p(" << x << ")" << std::string(x < 1000 ? 14 : 13, ' ')
      << truncate_places(p_success(x), 4) << '\n'
      << std::setprecision(2) << "expected N p(x)      " << expected << "  (sd " << stddev << ")\n"
      << "compromised          " << compromised << '\n';
  return out.str();
}

double analytic_rate(Forger forger, const VerifierConfig& config) {
  double match = 1.0;
  if (forger == Forger::skewed) match = 1.0 / kSkewedSpace;
  if (forger == Forger::uniform) match = 1e-5;
  if (!config.max_delay) return match;
  // Offsets k = B-1-f in {-1..8}; with r = (t'-t0) mod 64 uniform, the
  // estimate trails submission by 64k + r seconds.
  const std::int64_t limit = *config.max_delay;
  double live = 0;
  for (int k = -1; k <= 8; ++k)
    for (int r = 0; r < kStepSeconds; ++r)
      if (64 * k + r < limit) live += 1;
  return match * live / (10.0 * kStepSeconds);
}

RateResult per_attempt_rate(std::int64_t trials, Forger forger, const VerifierConfig& config, std::uint64_t seed,
                            unsigned workers) {
  if (trials <= 0) throw std::invalid_argument("per_attempt_rate: trials must be positive");
  Rng setup = stream_rng(seed, 0x5E7, 0);
  const TokenKey key = random_key(setup);
  const SyncModel sync(static_cast<int>(setup() % kStepSeconds));
  const Instant t0 = aligned_base_point(sync, Instant(0));
  const CustomerRecord record = provision("target", key, t0, 0, "static", 1);

  VerifierConfig cfg = config;
  cfg.check_replay = false;
  cfg.enforce_lockout = false;

  // Fixed slicing keeps results independent of the thread count.
  constexpr std::int64_t kSlices = 64;
  std::vector<RateResult> parts(kSlices);
  parallel_slices(kSlices, resolve_workers(workers), [&](std::int64_t begin, std::int64_t end, unsigned) {
    for (std::int64_t s = begin; s < end; ++s) {
      Rng rng = stream_rng(seed, 0xA77AC, static_cast<std::uint64_t>(s));
      std::uniform_int_distribution<std::int64_t> when(10 * kStepSeconds, (1LL << 31));
      RateResult& part = parts[static_cast<std::size_t>(s)];
      const std::int64_t n = trials * (s + 1) / kSlices - trials * s / kSlices;
      for (std::int64_t i = 0; i < n; ++i) {
        const Instant at = t0 + when(rng);
        Otp otp;
        switch (forger) {
          case Forger::skewed: otp = forge(rng); break;
          case Forger::uniform: otp = forge_uniform(rng); break;
          case Forger::oracle: {
            otp.lead = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 9)(rng));
            const auto f = recover_f(otp.lead, record.a0, compute_b(at, record.t0));
            otp.body = body(key, record.a0 + f);
            break;
          }
        }
        const auto out = evaluate(record, otp, at, cfg);
        ++part.trials;
        ++part.trials_by_lead[otp.lead];
        part.comparisons += out.comparisons;
        if (out.accepted()) {
          ++part.accepted;
          ++part.accepted_by_lead[otp.lead];
        }
      }
    }
  });

  RateResult total;
  for (const auto& p : parts) {
    total.trials += p.trials;
    total.accepted += p.accepted;
    total.comparisons += p.comparisons;
    for (int l = 0; l < 10; ++l) {
      total.trials_by_lead[static_cast<std::size_t>(l)] += p.trials_by_lead[static_cast<std::size_t>(l)];
      total.accepted_by_lead[static_cast<std::size_t>(l)] += p.accepted_by_lead[static_cast<std::size_t>(l)];
    }
  }
  return total;
}

}  // namespace otpforge::attack
