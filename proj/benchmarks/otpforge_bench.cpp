#include <benchmark/benchmark.h>

#include "otpforge/attack.hpp"
#include "otpforge/token.hpp"
#include "otpforge/totp.hpp"
#include "otpforge/verifier.hpp"

using namespace otpforge;

namespace {

const TokenKey kKey = TokenKey::from_ascii("12345678901234567890");

void BM_Body(benchmark::State& state) {
  std::int64_t a = 0;
  for (auto _ : state) benchmark::DoNotOptimize(body(kKey, a++));
}
BENCHMARK(BM_Body);

void BM_Hotp(benchmark::State& state) {
  std::int64_t a = 0;
  for (auto _ : state) benchmark::DoNotOptimize(totp::hotp(kKey, a++));
}
BENCHMARK(BM_Hotp);

void BM_TokenPress(benchmark::State& state) {
  const SyncModel sync(17);
  Token tok(kKey, sync, Instant(0), 0);
  Instant t(0);
  for (auto _ : state) {
    t = t + 61;
    benchmark::DoNotOptimize(tok.press(t));
  }
}
BENCHMARK(BM_TokenPress);

void BM_VerifyGenuine(benchmark::State& state) {
  const SyncModel sync(17);
  const Instant t0 = aligned_base_point(sync, Instant(0));
  Token tok(kKey, sync, t0, 0);
  auto rec = provision("c", kKey, t0, 0, "pw");
  Instant t = t0;
  for (auto _ : state) {
    t = t + 3600;
    const auto otp = tok.press(t).otp;
    benchmark::DoNotOptimize(verify(rec, otp, t + 30));
  }
}
BENCHMARK(BM_VerifyGenuine);

void BM_TotpWorstCase(benchmark::State& state) {
  const totp::TotpParams params{Instant(0), 30, 6};
  const auto code = totp::hotp(kKey, totp::totp_counter(Instant(99990), params));
  for (auto _ : state) benchmark::DoNotOptimize(totp::totp_verify(kKey, params, code, Instant(100470), 16));
}
BENCHMARK(BM_TotpWorstCase);

void BM_ForgeryRate(benchmark::State& state) {
  const auto cfg = VerifierConfig::single_attempt_model();
  for (auto _ : state)
    benchmark::DoNotOptimize(attack::per_attempt_rate(state.range(0), attack::Forger::skewed, cfg, 1, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForgeryRate)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Campaign(benchmark::State& state) {
  attack::CampaignConfig cfg;
  cfg.customers = state.range(0);
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(attack::run_campaign(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Campaign)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
