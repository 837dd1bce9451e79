#include "otpforge/registry.hpp"

#include <sstream>
#include <stdexcept>

namespace otpforge {

Registry::Registry(const Registry& other) {
  for (auto& r : other.records()) add(r);
}

Registry& Registry::operator=(const Registry& other) {
  if (this == &other) return *this;
  auto copy = other.records();
  std::unique_lock lock(map_mu_);
  entries_.clear();
  for (auto& r : copy) {
    const std::string id = r.id;
    entries_.emplace(id, std::make_unique<Entry>(std::move(r)));
  }
  return *this;
}

void Registry::add(CustomerRecord record) {
  std::unique_lock lock(map_mu_);
  if (entries_.contains(record.id)) throw std::invalid_argument("duplicate customer id '" + record.id + "'");
  const std::string id = record.id;
  entries_.emplace(id, std::make_unique<Entry>(std::move(record)));
}

Registry::Entry* Registry::entry(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : it->second.get();
}

void Registry::apply(const std::string& id, const VerifyOutcome& outcome, const VerifierConfig& config) {
  if (Entry* e = entry(id)) {
    std::lock_guard lock(e->mu);
    apply_outcome(e->record, outcome, config);
  }
}

bool Registry::reset_lockout(const std::string& id) {
  Entry* e = entry(id);
  if (e == nullptr) return false;
  std::lock_guard lock(e->mu);
  otpforge::reset_lockout(e->record);
  return true;
}

std::optional<CustomerRecord> Registry::find(const std::string& id) const {
  Entry* e = entry(id);
  if (e == nullptr) return std::nullopt;
  std::lock_guard lock(e->mu);
  return e->record;
}

std::vector<CustomerRecord> Registry::records() const {
  std::shared_lock lock(map_mu_);
  std::vector<CustomerRecord> out;
  out.reserve(entries_.size());
  for (auto& [id, e] : entries_) {
    std::lock_guard rec_lock(e->mu);
    out.push_back(e->record);
  }
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(map_mu_);
  return entries_.size();
}

void Registry::save_snapshot(std::ostream& out) const {
  for (const auto& r : records()) {
    out << r.id << ',' << r.key.hex() << ',' << r.t0.seconds() << ',' << r.a0 << ',' << r.high_water << ','
        << r.failures << ',' << (r.locked ? 1 : 0) << ',' << r.max_attempts << ',' << r.static_digest << '\n';
  }
}

Registry Registry::load_snapshot(std::istream& in) {
  Registry reg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    try {
      if (f.size() != 9) throw std::invalid_argument("expected 9 fields");
      CustomerRecord r{f[0],
                       f[8],
                       TokenKey::from_hex(f[1]),
                       Instant(std::stoll(f[2])),
                       std::stoll(f[3]),
                       std::stoll(f[4]),
                       std::stoi(f[5]),
                       f[6] == "1",
                       std::stoi(f[7])};
      if (f[6] != "0" && f[6] != "1") throw std::invalid_argument("locked flag must be 0 or 1");
      if (r.high_water < r.a0 || r.failures < 0 || r.failures > r.max_attempts)
        throw std::invalid_argument("record violates invariants");
      reg.add(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("snapshot line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return reg;
}

}  // namespace otpforge
