#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "otpforge/analysis.hpp"
#include "otpforge/registry.hpp"
#include "otpforge/time_notation.hpp"
#include "otpforge/token.hpp"
#include "otpforge/totp.hpp"

namespace otpforge::cli {

std::vector<Instant> fixed_schedule(Instant start, double interval, std::int64_t count) {
  if (interval < 0 || count < 0) throw std::invalid_argument("schedule: negative interval or count");
  std::vector<Instant> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    out.push_back(start + static_cast<std::int64_t>(std::floor(static_cast<double>(i) * interval)));
  return out;
}

std::vector<Instant> parse_schedule(const std::string& text) {
  std::vector<Instant> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.emplace_back(parse_seconds(item));
    if (out.size() > 1 && out.back() < out[out.size() - 2])
      throw std::invalid_argument("schedule must be sorted (at '" + item + "')");
  }
  return out;
}

void cmd_press(const PressOptions& opts, std::ostream& out) {
  for (std::size_t i = 1; i < opts.schedule.size(); ++i)
    if (opts.schedule[i] < opts.schedule[i - 1]) throw std::invalid_argument("schedule must be sorted");
  if (!opts.schedule.empty() && opts.schedule.front() < opts.t0)
    throw std::invalid_argument("schedule starts before the base time");

  Token token(opts.key, opts.sync, opts.t0, opts.a0);
  if (opts.format == TableFormat::csv)
    out << "table,index,combination,pattern\n";
  else
    out << std::setw(5) << "i" << "  " << std::setw(6) << "comb." << "  pattern\n";

  std::int64_t index = 0;
  std::optional<int> prev_lead;
  for (Instant t : opts.schedule) {
    const auto r = token.press(t);
    if (r.kind == PressKind::redisplay) {
      if (opts.format == TableFormat::text) out << std::setw(5) << "-" << "  " << r.otp.str() << "  redisplay\n";
      continue;
    }
    std::string pattern;
    if (prev_lead) pattern = std::to_string((r.otp.lead - *prev_lead + 10) % 10);
    prev_lead = r.otp.lead;
    if (opts.format == TableFormat::csv)
      out << opts.label << ',' << index << ',' << r.otp.str() << ',' << pattern << '\n';
    else
      out << std::setw(5) << index << "  " << r.otp.str() << "  " << pattern << '\n';
    ++index;
  }
}

void cmd_attack(const AttackOptions& opts, std::ostream& out) {
  if (opts.analytic_only) {
    out << attack::success_table(1, 6, opts.campaign.auths_per_year);
    return;
  }
  const auto report = attack::run_campaign(opts.campaign);
  out << report.table();
  if (opts.out_dir) {
    std::filesystem::create_directories(*opts.out_dir);
    std::ofstream csv(std::filesystem::path(*opts.out_dir) / "campaign.csv");
    std::ofstream txt(std::filesystem::path(*opts.out_dir) / "campaign.txt");
    if (!csv || !txt) throw std::runtime_error("cannot write reports to " + *opts.out_dir);
    csv << report.csv();
    txt << report.table() << '\n' << attack::success_table(1, 6, opts.campaign.auths_per_year);
  }
}

namespace {

std::string format_set(const std::set<int>& s) {
  std::string out = "{";
  for (int v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

std::vector<int> best_pattern(const analysis::PressTrace& t) {
  const bool complete = t.pattern.size() == t.combinations.size() &&
                        std::all_of(t.pattern.begin() + 1, t.pattern.end(), [](const auto& p) { return p.has_value(); });
  return complete ? analysis::recorded_pattern(t) : analysis::computed_pattern(t);
}

void run_report(const analysis::PressTrace& t, std::ostream& out) {
  out << std::left << std::setw(10) << t.label << std::right << std::setw(5) << t.combinations.size() << "  ";
  if (t.combinations.size() < 2) {
    out << "too short\n";
    return;
  }
  const auto pattern = best_pattern(t);
  std::optional<analysis::RunPrediction> pred;
  try {
    if (t.interval.hi > t.interval.lo || t.interval.lo > 0) pred = analysis::predict_runs(t.interval);
  } catch (const std::invalid_argument&) {
  }
  if (!pred) {
    std::set<int> symbols(pattern.begin(), pattern.end());
    out << "symbols " << format_set(symbols) << "  (no prediction)\n";
    return;
  }
  const auto summary = analysis::split_runs(pattern, pred->minority_symbol);
  const auto runs = summary.complete_runs();
  const std::set<int> observed(runs.begin(), runs.end());
  bool ok = true;
  for (int r : runs) ok = ok && pred->contains(r);
  for (int s : pattern) ok = ok && (s == pred->minority_symbol || s == pred->majority_symbol);
  out << "terminator " << pred->minority_symbol << "  runs " << format_set(observed) << "  predicted [" << pred->min_run
      << "," << (pred->max_run ? std::to_string(*pred->max_run) : "inf") << "]  " << (ok ? "consistent" : "MISMATCH")
      << '\n';
}

void chi_report(const analysis::DigitHistogram& h, double alpha, std::ostream& out) {
  const auto skew = analysis::skew_model();
  const auto uniform = analysis::uniform_model();
  out << "pos  chi2(skew)  chi2(uniform)  critical  skew  uniform\n";
  for (std::size_t pos = 0; pos < 5; ++pos) {
    const auto a = analysis::chi_square(h[pos], skew, alpha);
    const auto b = analysis::chi_square(h[pos], uniform, alpha);
    out << "bcdef"[pos] << "    " << std::fixed << std::setprecision(4) << std::setw(10) << a.statistic << "  "
        << std::setw(13) << b.statistic << "  " << std::setprecision(3) << std::setw(8) << a.critical << "  "
        << (a.reject ? "reject" : "fit   ") << "  " << (b.reject ? "reject" : "fit") << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace

void cmd_analyze(const AnalyzeOptions& opts, std::ostream& out) {
  if (opts.inputs.empty() && opts.interval_tables.empty() && !opts.digit_counts) throw std::invalid_argument("analyze: no input files");
  std::vector<analysis::PressTrace> traces;
  for (const auto& path : opts.inputs) {
    auto more = analysis::load_traces(path);
    traces.insert(traces.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  std::vector<std::string> extra;
  for (const auto& path : opts.interval_tables) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    for (auto& row : analysis::load_interval_table(in)) extra.push_back(std::move(row.combination));
  }
  std::size_t combos = extra.size();
  for (const auto& t : traces) combos += t.combinations.size();
  if (!opts.digit_counts && combos == 0) throw std::invalid_argument("analyze: inputs contain no combinations");

  if (!traces.empty()) {
    out << "run structure\n";
    for (const auto& t : traces) run_report(t, out);
    out << '\n';
  }
  analysis::DigitHistogram h;
  if (opts.digit_counts) {
    std::ifstream in(*opts.digit_counts);
    if (!in) throw std::runtime_error("cannot open " + *opts.digit_counts);
    h = analysis::load_digit_counts(in);
    out << "digit counts (" << *opts.digit_counts << ")\n";
  } else {
    std::vector<std::string> all = extra;
    for (const auto& t : traces) all.insert(all.end(), t.combinations.begin(), t.combinations.end());
    h = analysis::digit_histogram(std::span<const std::string>(all));
    std::int64_t distinct = 0;
    for (auto c : h[0]) distinct += c;
    out << "digit counts over " << distinct << " distinct combinations\n";
  }
  out << analysis::histogram_report(h) << '\n';
  chi_report(h, opts.alpha, out);
}

void cmd_provision(const ProvisionOptions& opts, std::ostream& out) {
  Registry reg;
  if (std::filesystem::exists(opts.snapshot)) {
    std::ifstream in(opts.snapshot);
    reg = Registry::load_snapshot(in);
  }
  auto rng = attack::stream_rng(opts.seed, 0x960, 0);
  TokenKey key = opts.key_hex ? TokenKey::from_hex(*opts.key_hex) : attack::random_key(rng);
  const SyncModel sync(opts.phase.value_or(static_cast<int>(rng() % kStepSeconds)));
  const Instant t0 = aligned_base_point(sync, opts.not_before);
  reg.add(provision(opts.id, key, t0, opts.a0, opts.static_credential, opts.max_attempts));
  {
    const auto tmp = opts.snapshot + ".tmp";
    std::ofstream file(tmp, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + tmp);
    reg.save_snapshot(file);
    file.close();
    std::filesystem::rename(tmp, opts.snapshot);
  }
  out << "id " << opts.id << "\nkey " << key.hex() << "\nphase " << sync.phase() << "\nt0 " << t0.seconds()
      << "\na0 " << opts.a0 << '\n';
}

void cmd_vectors(const TokenKey& key, std::int64_t count, std::ostream& out) {
  out << "counter,hotp6,body\n";
  for (std::int64_t c = 0; c < count; ++c)
    out << c << ',' << totp::hotp(key, c) << ',' << body(key, c).str() << '\n';
}

ServiceSettings settings_from_env() {
  if (const char* path = std::getenv("OTPFORGE_CONFIG"); path && *path)
    return ServiceSettings::from(KeyValueConfig::load(path));
  return {};
}

}  // namespace otpforge::cli
