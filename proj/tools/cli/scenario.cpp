#include "cli/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "otpforge/attack.hpp"
#include "otpforge/authd.hpp"
#include "otpforge/registry.hpp"
#include "otpforge/time_notation.hpp"
#include "otpforge/token.hpp"

namespace otpforge::cli {
namespace {

using json = nlohmann::json;

Instant time_value(const json& v, const char* field) {
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return Instant(v.get<std::int64_t>());
  if (v.is_string()) return Instant(parse_seconds(v.get<std::string>()));
  throw std::invalid_argument(std::string("'") + field + "' must be seconds or m:ss");
}

std::optional<std::string> opt_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("'") + field + "' must be a string");
  return it->get<std::string>();
}

Actor parse_actor(const json& a, std::uint64_t seed, std::size_t index, int default_attempts) {
  if (!a.is_object()) throw std::invalid_argument("actor must be an object");
  auto rng = attack::stream_rng(seed, 0xAC7, index);
  TokenKey key = attack::random_key(rng);
  const int drawn_phase = static_cast<int>(rng() % kStepSeconds);
  Actor actor{a.at("id").get<std::string>(), key, SyncModel(a.value("phase", drawn_phase)), Instant(0),
              a.value("a0", std::int64_t{0}), a.value("static", std::string("pin")),
              a.value("max_attempts", default_attempts)};
  if (auto hex = opt_string(a, "key")) actor.key = TokenKey::from_hex(*hex);
  if (auto it = a.find("t0"); it != a.end())
    actor.t0 = time_value(*it, "t0");
  else
    actor.t0 = aligned_base_point(actor.sync, Instant(0));
  return actor;
}

Action parse_action(const std::string& s) {
  if (s == "press") return Action::press;
  if (s == "auth") return Action::auth;
  if (s == "forge") return Action::forge;
  throw std::invalid_argument("unknown action '" + s + "'");
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
      if (!have_header) {
        have_header = true;
        sc.seed = j.value("seed", std::uint64_t{1});
        if (auto it = j.find("max_delay"); it != j.end())
          sc.max_delay = it->is_null() ? std::nullopt : std::optional<std::int64_t>(it->get<std::int64_t>());
        const int attempts = j.value("max_attempts", kDefaultMaxAttempts);
        const auto& actors = j.at("actors");
        if (!actors.is_array() || actors.empty()) throw std::invalid_argument("'actors' must be a non-empty array");
        for (std::size_t i = 0; i < actors.size(); ++i) {
          Actor a = parse_actor(actors[i], sc.seed, i, attempts);
          for (const auto& other : sc.actors)
            if (other.id == a.id) throw std::invalid_argument("duplicate actor '" + a.id + "'");
          sc.actors.push_back(std::move(a));
        }
        continue;
      }
      ScenarioEvent e;
      e.line = lineno;
      e.t = time_value(j.at("t"), "t");
      e.action = parse_action(j.at("action").get<std::string>());
      e.actor = j.at("actor").get<std::string>();
      if (std::none_of(sc.actors.begin(), sc.actors.end(), [&](const Actor& a) { return a.id == e.actor; }))
        throw std::invalid_argument("unknown actor '" + e.actor + "'");
      e.otp = opt_string(j, "otp");
      e.static_credential = opt_string(j, "static");
      sc.events.push_back(std::move(e));
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ScenarioError(lineno, ex.what());
    }
  }
  if (!have_header) throw ScenarioError(lineno, "missing header line");
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t < b.t; });
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario " + path);
  return parse_scenario(in);
}

ReplaySummary run_scenario(const Scenario& scenario, std::ostream& log, std::ostream& report) {
  Registry registry;
  std::map<std::string, Token> tokens;
  for (const auto& a : scenario.actors) {
    registry.add(provision(a.id, a.key, a.t0, a.a0, a.static_credential, a.max_attempts));
    tokens.emplace(a.id, Token(a.key, a.sync, a.t0, a.a0));
  }
  const VerifierConfig config{scenario.max_delay, true, true};
  authd::EventLog events(log);
  auto forger = attack::stream_rng(scenario.seed, 0xF07, 0);

  ReplaySummary summary;
  report << "t,actor,action,otp,generated,delay,status,reason\n";
  for (const auto& e : scenario.events) {
    Token& token = tokens.at(e.actor);
    const auto& actor = *std::find_if(scenario.actors.begin(), scenario.actors.end(),
                                      [&](const Actor& a) { return a.id == e.actor; });
    try {
      if (e.action == Action::press) {
        const auto r = token.press(e.t);
        ++(r.kind == PressKind::fresh ? summary.presses : summary.redisplays);
        continue;
      }
      std::string otp;
      std::string generated, delay;
      if (e.action == Action::auth) {
        if (e.otp) {
          otp = *e.otp;
        } else {
          if (!token.display()) throw std::invalid_argument("auth before the token was pressed");
          otp = token.display()->otp.str();
          generated = std::to_string(token.last_generated().seconds());
          delay = std::to_string(e.t - token.last_generated());
        }
      } else {
        otp = attack::forge(forger).str();
      }
      const std::string credential = e.static_credential.value_or(actor.static_credential);
      const auto out = registry.verify(e.actor, std::string_view(credential), otp, e.t, config,
                                       [&](const VerifyOutcome& o) { events.append(e.t, e.actor, o); });
      const bool is_forge = e.action == Action::forge;
      ++(is_forge ? summary.forgeries : summary.auths);
      if (out.accepted()) ++(is_forge ? summary.forgeries_accepted : summary.accepted);
      ++summary.reasons[std::string(to_string(out.reason))];
      report << e.t.seconds() << ',' << e.actor << ',' << (is_forge ? "forge" : "auth") << ',' << otp << ','
             << generated << ',' << delay << ',' << to_string(out.status) << ',' << to_string(out.reason) << '\n';
    } catch (const std::invalid_argument& ex) {
      throw ScenarioError(e.line, ex.what());
    }
  }
  return summary;
}

}  // namespace otpforge::cli
