#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/scenario.hpp"
#include "otpforge/authd.hpp"
#include "otpforge/registry.hpp"
#include "otpforge/time_notation.hpp"

namespace {

using namespace otpforge;

authd::TcpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

std::pair<std::string, std::uint16_t> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("listen address must be host:port");
  const int port = std::stoi(listen.substr(colon + 1));
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  return {listen.substr(0, colon), static_cast<std::uint16_t>(port)};
}

Registry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot " + path);
  return Registry::load_snapshot(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emulator, verifier and attack simulator for a synchronized-digit OTP token"};
  app.require_subcommand(1);
  ServiceSettings settings;

  // press
  auto* press = app.add_subcommand("press", "Simulate presses and print the resulting table");
  std::string key_hex = "3132333435363738393031323334353637383930";
  int phase = 0;
  std::int64_t t0 = 0, a0 = 0, count = 0;
  std::string interval, schedule, label = "press", format = "text";
  press->add_option("--key", key_hex, "Token key (hex, >= 16 bytes)");
  press->add_option("--phase", phase, "Boundary phase in [0, 64)")->check(CLI::Range(0, 63));
  press->add_option("--t0", t0, "Base time (s)");
  press->add_option("--a0", a0, "Initial counter");
  auto* interval_opt = press->add_option("--interval", interval, "Fixed press interval (s or m:ss[+])");
  press->add_option("--count", count, "Number of presses with --interval")->needs(interval_opt);
  press->add_option("--schedule", schedule, "Comma-separated press times")->excludes(interval_opt);
  press->add_option("--label", label, "Table label in CSV output");
  press->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  // replay
  auto* replay = app.add_subcommand("replay", "Run a JSON-lines scenario in simulated time");
  std::string scenario_path, log_path, report_path;
  replay->add_option("scenario", scenario_path, "Scenario file")->required();
  replay->add_option("--log", log_path, "Write the auth event log here");
  replay->add_option("--report", report_path, "Write the per-attempt CSV here instead of stdout");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Forgery campaign against simulated customers");
  cli::AttackOptions attack_opts;
  std::string strategy = "burst";
  std::string out_dir;
  attack_cmd->add_option("--customers", attack_opts.campaign.customers, "Customers N")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--r", attack_opts.campaign.max_attempts, "Allowed attempts r")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--years", attack_opts.campaign.years, "Simulated years")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--auths", attack_opts.campaign.auths_per_year, "Logins per year")
      ->check(CLI::PositiveNumber);
  attack_cmd->add_option("--attempts", attack_opts.campaign.attempts_per_auth, "Forgeries per login")
      ->check(CLI::NonNegativeNumber);
  attack_cmd->add_option("--strategy", strategy, "burst or stealth")->check(CLI::IsMember({"burst", "stealth"}));
  attack_cmd->add_option("--seed", attack_opts.campaign.seed, "RNG seed");
  attack_cmd->add_option("--workers", attack_opts.campaign.workers, "Threads (0: all cores)");
  attack_cmd->add_option("--out", out_dir, "Directory for campaign.csv / campaign.txt");
  attack_cmd->add_flag("--analytic", attack_opts.analytic_only, "Only print the success table for r = 1..6");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Run structure and digit statistics of trace CSVs");
  cli::AnalyzeOptions analyze_opts;
  std::string digit_counts;
  analyze->add_option("inputs", analyze_opts.inputs, "Trace CSV files (table,index,combination,pattern)");
  analyze->add_option("--intervals", analyze_opts.interval_tables, "Random-interval tables to include in the histogram");
  analyze->add_option("--digit-counts", digit_counts, "Test a position,d0..d9 count table instead");
  analyze->add_option("--alpha", analyze_opts.alpha, "Significance level");

  // provision
  auto* prov = app.add_subcommand("provision", "Add a customer record to a snapshot");
  cli::ProvisionOptions prov_opts;
  std::int64_t not_before = 0;
  int prov_phase = -1;
  std::string prov_key;
  prov->add_option("--snapshot", prov_opts.snapshot, "Snapshot CSV");
  prov->add_option("--id", prov_opts.id, "Customer id")->required();
  prov->add_option("--static", prov_opts.static_credential, "Static password")->required();
  prov->add_option("--key", prov_key, "Token key (hex); random if omitted");
  prov->add_option("--phase", prov_phase, "Boundary phase; random if omitted")->check(CLI::Range(0, 63));
  prov->add_option("--not-before", not_before, "Earliest base time (s)");
  prov->add_option("--a0", prov_opts.a0, "Initial counter");
  auto* prov_attempts = prov->add_option("--max-attempts", prov_opts.max_attempts, "Lockout threshold r");
  prov->add_option("--seed", prov_opts.seed, "RNG seed for key and phase");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the authentication service");
  std::string config_path, listen, serve_log, serve_snapshot, clock = "live";
  std::optional<std::int64_t> max_delay;
  bool stdio = false, no_delay_bound = false;
  serve->add_option("--config", config_path, "key=value config (default: $OTPFORGE_CONFIG)");
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--log", serve_log, "Event log path");
  serve->add_option("--snapshot", serve_snapshot, "Registry snapshot path");
  serve->add_option("--max-delay", max_delay, "Delay bound (s)");
  serve->add_flag("--no-delay-bound", no_delay_bound, "Disable the delay bound");
  serve->add_option("--clock", clock, "live or simulated")->check(CLI::IsMember({"live", "simulated"}));
  serve->add_flag("--stdio", stdio, "Serve stdin/stdout instead of TCP");

  // vectors
  auto* vectors = app.add_subcommand("vectors", "HOTP and body values for a key");
  std::string vec_key;
  std::int64_t vec_count = 10;
  vectors->add_option("--key", vec_key, "Key (hex); default is the 20-byte ASCII test key");
  vectors->add_option("--count", vec_count, "Counters 0..count-1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*press) {
      cli::PressOptions o{TokenKey::from_hex(key_hex), SyncModel(phase), Instant(t0), a0, {}, label,
                          format == "csv" ? cli::TableFormat::csv : cli::TableFormat::text};
      if (!interval.empty())
        o.schedule = cli::fixed_schedule(Instant(t0), parse_duration(interval), count);
      else
        o.schedule = cli::parse_schedule(schedule);
      cli::cmd_press(o, std::cout);
    } else if (*replay) {
      const auto sc = cli::load_scenario(scenario_path);
      std::ofstream log_file, report_file;
      std::ostringstream discard;
      std::ostream* log = &discard;
      std::ostream* report = &std::cout;
      if (!log_path.empty()) {
        log_file.open(log_path, std::ios::trunc);
        if (!log_file) throw std::runtime_error("cannot write " + log_path);
        log = &log_file;
      }
      if (!report_path.empty()) {
        report_file.open(report_path, std::ios::trunc);
        if (!report_file) throw std::runtime_error("cannot write " + report_path);
        report = &report_file;
      }
      const auto s = cli::run_scenario(sc, *log, *report);
      std::cerr << "presses " << s.presses << " (redisplays " << s.redisplays << "), auths " << s.auths
                << " accepted " << s.accepted << ", forgeries " << s.forgeries << " accepted "
                << s.forgeries_accepted << '\n';
      for (const auto& [reason, n] : s.reasons) std::cerr << "  " << reason << ' ' << n << '\n';
    } else if (*attack_cmd) {
      attack_opts.campaign.strategy = attack::parse_strategy(strategy);
      if (!out_dir.empty()) attack_opts.out_dir = out_dir;
      cli::cmd_attack(attack_opts, std::cout);
    } else if (*analyze) {
      if (!digit_counts.empty()) analyze_opts.digit_counts = digit_counts;
      cli::cmd_analyze(analyze_opts, std::cout);
    } else if (*prov) {
      settings = cli::settings_from_env();
      if (prov_opts.snapshot.empty()) prov_opts.snapshot = settings.snapshot_path;
      if (prov_attempts->count() == 0) prov_opts.max_attempts = settings.max_attempts;
      if (!prov_key.empty()) prov_opts.key_hex = prov_key;
      if (prov_phase >= 0) prov_opts.phase = prov_phase;
      prov_opts.not_before = Instant(not_before);
      cli::cmd_provision(prov_opts, std::cout);
    } else if (*serve) {
      settings = config_path.empty() ? cli::settings_from_env() : ServiceSettings::from(KeyValueConfig::load(config_path));
      if (!listen.empty()) settings.listen = listen;
      if (!serve_log.empty()) settings.log_path = serve_log;
      if (!serve_snapshot.empty()) settings.snapshot_path = serve_snapshot;
      if (max_delay) settings.max_delay = *max_delay;
      VerifierConfig vc{settings.max_delay, true, true};
      if (no_delay_bound) vc.max_delay.reset();

      Registry reg = load_registry(settings.snapshot_path);
      if (std::filesystem::exists(settings.log_path)) reg = authd::replay_log(reg, settings.log_path, vc);
      authd::EventLog log(settings.log_path);
      authd::Service service(reg, vc, clock == "live" ? authd::ClockMode::live : authd::ClockMode::simulated, &log);
      if (stdio) {
        authd::serve_stream(service, std::cin, std::cout);
      } else {
        const auto [host, port] = split_listen(settings.listen);
        authd::TcpServer server(service, host, port);
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cerr << "listening on " << host << ':' << server.port() << '\n';
        server.run();
        g_server = nullptr;
      }
    } else if (*vectors) {
      const TokenKey key = vec_key.empty() ? TokenKey::from_ascii("12345678901234567890") : TokenKey::from_hex(vec_key);
      cli::cmd_vectors(key, vec_count, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
