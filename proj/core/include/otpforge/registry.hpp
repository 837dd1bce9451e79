#pragma once

#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <vector>

#include "otpforge/verifier.hpp"

namespace otpforge {

/// Customer records keyed by id. Distinct customers verify concurrently;
/// attempts on one customer are serialized.
class Registry {
public:
  Registry() = default;
  Registry(const Registry& other);
  Registry& operator=(const Registry& other);

  /// Throws std::invalid_argument on a duplicate id.
  void add(CustomerRecord record);

  /// Decide and apply an attempt atomically. Unknown ids yield a
  /// `unknown-customer` reject. `on_decided` runs under the customer's lock,
  /// so event-log appends for one customer keep decision order.
  template <typename OnDecided>
  VerifyOutcome verify(const std::string& id, std::optional<std::string_view> static_credential,
                       std::string_view otp_text, Instant t_prime, const VerifierConfig& config,
                       OnDecided&& on_decided);
  VerifyOutcome verify(const std::string& id, std::optional<std::string_view> static_credential,
                       std::string_view otp_text, Instant t_prime, const VerifierConfig& config = {}) {
    return verify(id, static_credential, otp_text, t_prime, config, [](const VerifyOutcome&) {});
  }

  /// Applies an already-decided outcome (log replay). Unknown ids are ignored.
  void apply(const std::string& id, const VerifyOutcome& outcome, const VerifierConfig& config = {});

  /// Returns false for an unknown id.
  bool reset_lockout(const std::string& id);

  std::optional<CustomerRecord> find(const std::string& id) const;
  std::vector<CustomerRecord> records() const;  // sorted by id
  std::size_t size() const;

  /// One line per record: id,key_hex,t0,a0,high_water,failures,locked,max_attempts,static_digest
  void save_snapshot(std::ostream& out) const;
  /// Throws std::runtime_error naming the line on malformed input.
  static Registry load_snapshot(std::istream& in);

  friend bool operator==(const Registry& a, const Registry& b) { return a.records() == b.records(); }

private:
  struct Entry {
    explicit Entry(CustomerRecord r) : record(std::move(r)) {}
    mutable std::mutex mu;
    CustomerRecord record;
  };
  Entry* entry(const std::string& id) const;

  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
};

template <typename OnDecided>
VerifyOutcome Registry::verify(const std::string& id, std::optional<std::string_view> static_credential,
                               std::string_view otp_text, Instant t_prime, const VerifierConfig& config,
                               OnDecided&& on_decided) {
  Entry* e = entry(id);
  if (e == nullptr) {
    VerifyOutcome out;
    out.reason = VerifyReason::unknown_customer;
    on_decided(out);
    return out;
  }
  std::lock_guard lock(e->mu);
  auto out = otpforge::verify(e->record, static_credential, otp_text, t_prime, config);
  on_decided(out);
  return out;
}

}  // namespace otpforge
