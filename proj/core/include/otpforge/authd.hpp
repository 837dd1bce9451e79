#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "otpforge/registry.hpp"

namespace otpforge::authd {

enum class ClockMode { simulated, live };

/// One `{"type":"auth", ...}` frame.
struct AuthRequest {
  std::string customer_id;
  std::string static_credential;
  std::string otp;
  std::optional<Instant> at;  // client-asserted; required in simulated mode
};

/// Malformed frame. The connection stays open.
class ProtocolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses one request line. Unknown fields are ignored.
AuthRequest parse_request(std::string_view line);

std::string result_line(const VerifyOutcome& outcome);
std::string error_line(std::string_view message);

struct AuthEvent {
  std::int64_t seq = 0;
  Instant at;
  std::string customer_id;
  VerifyStatus status = VerifyStatus::reject;
  VerifyReason reason = VerifyReason::bad_otp;
  std::optional<std::int64_t> recovered_a;

  friend bool operator==(const AuthEvent&, const AuthEvent&) = default;
};

std::string event_line(const AuthEvent& event);
AuthEvent parse_event(std::string_view line);

/// Append-only JSON-lines log with strictly increasing sequence numbers.
class EventLog {
public:
  /// Events go to `sink` (not owned).
  explicit EventLog(std::ostream& sink, std::int64_t next_seq = 1) : sink_(&sink), next_seq_(next_seq) {}
  /// Opens `path` for appending; continues numbering after the events
  /// already present.
  explicit EventLog(const std::filesystem::path& path);

  /// Assigns the next sequence number, writes and flushes. Thread-safe.
  AuthEvent append(Instant at, const std::string& customer_id, const VerifyOutcome& outcome);
  std::int64_t next_seq() const;

private:
  mutable std::mutex mu_;
  std::ofstream file_;
  std::ostream* sink_;
  std::int64_t next_seq_;
};

/// Raised by replay_log; `offset` is the byte offset of the offending line.
class LogReplayError : public std::runtime_error {
public:
  LogReplayError(std::uint64_t offset, const std::string& what)
      : std::runtime_error("event log corrupt at byte offset " + std::to_string(offset) + ": " + what),
        offset(offset) {}
  std::uint64_t offset;
};

/// Reapplies every event in `log` to `snapshot`. Each line must be a
/// complete, newline-terminated event with the expected sequence number.
Registry replay_log(const Registry& snapshot, std::istream& log, const VerifierConfig& config = {});
Registry replay_log(const Registry& snapshot, const std::filesystem::path& path, const VerifierConfig& config = {});

/// Request handler shared by every transport.
class Service {
public:
  using Clock = std::function<Instant()>;

  Service(Registry& registry, VerifierConfig config, ClockMode mode, EventLog* log = nullptr, Clock clock = {});

  /// Handles one frame (without its newline) and returns the response frame.
  std::string handle_line(std::string_view line);

  const VerifierConfig& config() const { return config_; }

private:
  Registry& registry_;
  VerifierConfig config_;
  ClockMode mode_;
  EventLog* log_;
  Clock clock_;
};

/// Serves newline-delimited frames from `in` until EOF.
void serve_stream(Service& service, std::istream& in, std::ostream& out);

/// TCP listener on `host:port` (port 0 picks one). Each connection gets its
/// own thread. Blocks in run() until stop() is called.
class TcpServer {
public:
  TcpServer(Service& service, const std::string& host, std::uint16_t port);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  void run();
  void stop();

private:
  Service& service_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
};

/// Seconds since the Unix epoch.
Instant system_clock_now();

}  // namespace otpforge::authd
