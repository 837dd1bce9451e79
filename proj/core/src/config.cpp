#include "otpforge/config.hpp"

#include <fstream>
#include <stdexcept>

namespace otpforge {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse(in);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> KeyValueConfig::get_int(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  std::size_t used = 0;
  std::int64_t out = 0;
  try {
    out = std::stoll(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v->size()) throw std::runtime_error("config key '" + key + "' is not an integer");
  return out;
}

ServiceSettings ServiceSettings::from(const KeyValueConfig& cfg) {
  ServiceSettings s;
  if (auto v = cfg.get_int("max_delay")) s.max_delay = *v;
  if (auto v = cfg.get_int("max_attempts")) s.max_attempts = static_cast<int>(*v);
  if (auto v = cfg.get("listen")) s.listen = *v;
  if (auto v = cfg.get("log")) s.log_path = *v;
  if (auto v = cfg.get("log_path")) s.log_path = *v;
  if (auto v = cfg.get("snapshot")) s.snapshot_path = *v;
  if (s.max_delay <= 0) throw std::runtime_error("config: max_delay must be positive");
  if (s.max_attempts <= 0) throw std::runtime_error("config: max_attempts must be positive");
  return s;
}

}  // namespace otpforge
