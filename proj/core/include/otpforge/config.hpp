#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>

namespace otpforge {

/// Flat `key=value` settings. Blank lines and lines starting with '#' are
/// skipped; whitespace around keys and values is trimmed.
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

/// Settings shared by `otpforge serve` and the scenario runner.
struct ServiceSettings {
  std::int64_t max_delay = 480;
  int max_attempts = 3;
  std::string listen = "127.0.0.1:7480";
  std::string log_path = "authd-events.jsonl";
  std::string snapshot_path = "registry.csv";

  static ServiceSettings from(const KeyValueConfig& cfg);
};

}  // namespace otpforge
