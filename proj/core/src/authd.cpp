#include "otpforge/authd.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "otpforge/time_notation.hpp"

namespace otpforge::authd {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

std::string required_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + field + "'");
  if (!it->is_string()) throw ProtocolError(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

Instant instant_field(const json& v) {
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return Instant(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return Instant(static_cast<std::int64_t>(v.get<std::uint64_t>()));
  if (v.is_string()) {
    try {
      return Instant(parse_seconds(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ProtocolError(std::string("field 'at': ") + e.what());
    }
  }
  throw ProtocolError("field 'at' must be a non-negative integer or m:ss string");
}

}  // namespace

AuthRequest parse_request(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("invalid JSON");
  if (!j.is_object()) throw ProtocolError("frame must be a JSON object");
  if (required_string(j, "type") != "auth") throw ProtocolError("unsupported frame type");
  AuthRequest req;
  req.customer_id = required_string(j, "customer");
  req.static_credential = required_string(j, "static");
  req.otp = required_string(j, "otp");
  if (auto it = j.find("at"); it != j.end() && !it->is_null()) req.at = instant_field(*it);
  return req;
}

std::string result_line(const VerifyOutcome& outcome) {
  ordered_json j;
  j["type"] = "result";
  j["status"] = to_string(outcome.status);
  j["reason"] = to_string(outcome.reason);
  return j.dump();
}

std::string error_line(std::string_view message) {
  ordered_json j;
  j["type"] = "error";
  j["message"] = message;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string event_line(const AuthEvent& event) {
  ordered_json j;
  j["seq"] = event.seq;
  j["at"] = event.at.seconds();
  j["customer"] = event.customer_id;
  j["status"] = to_string(event.status);
  j["reason"] = to_string(event.reason);
  if (event.recovered_a) j["A"] = *event.recovered_a;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

AuthEvent parse_event(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("not a JSON object");
  try {
    AuthEvent e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.at = Instant(j.at("at").get<std::int64_t>());
    e.customer_id = j.at("customer").get<std::string>();
    e.status = parse_status(j.at("status").get<std::string>());
    e.reason = parse_reason(j.at("reason").get<std::string>());
    if (auto it = j.find("A"); it != j.end()) e.recovered_a = it->get<std::int64_t>();
    if (e.status == VerifyStatus::accept && (e.reason != VerifyReason::ok || !e.recovered_a))
      throw std::invalid_argument("accept event without ok/A");
    return e;
  } catch (const json::exception& ex) {
    throw std::invalid_argument(ex.what());
  }
}

EventLog::EventLog(const std::filesystem::path& path) : sink_(nullptr), next_seq_(1) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) next_seq_ = parse_event(line).seq + 1;
  }
  file_.open(path, std::ios::app);
  if (!file_) throw std::runtime_error("cannot open event log " + path.string());
  sink_ = &file_;
}

AuthEvent EventLog::append(Instant at, const std::string& customer_id, const VerifyOutcome& outcome) {
  std::lock_guard lock(mu_);
  AuthEvent e{next_seq_++, at, customer_id, outcome.status, outcome.reason, outcome.recovered_a};
  *sink_ << event_line(e) << '\n';
  sink_->flush();
  return e;
}

std::int64_t EventLog::next_seq() const {
  std::lock_guard lock(mu_);
  return next_seq_;
}

Registry replay_log(const Registry& snapshot, std::istream& log, const VerifierConfig& config) {
  Registry reg = snapshot;
  std::uint64_t offset = 0;
  std::int64_t last_seq = 0;
  std::string line;
  while (true) {
    const std::uint64_t line_start = offset;
    line.clear();
    bool terminated = false;
    for (int c; (c = log.get()) != std::char_traits<char>::eof();) {
      ++offset;
      if (c == '\n') {
        terminated = true;
        break;
      }
      line.push_back(static_cast<char>(c));
    }
    if (!terminated) {
      if (line.empty()) break;
      throw LogReplayError(line_start, "truncated final line");
    }
    if (line.empty()) throw LogReplayError(line_start, "empty line");
    AuthEvent e;
    try {
      e = parse_event(line);
    } catch (const std::exception& ex) {
      throw LogReplayError(line_start, ex.what());
    }
    if (e.seq <= last_seq) throw LogReplayError(line_start, "sequence number not increasing");
    last_seq = e.seq;
    VerifyOutcome out{e.status, e.reason, e.recovered_a, std::nullopt, 0};
    reg.apply(e.customer_id, out, config);
  }
  return reg;
}

Registry replay_log(const Registry& snapshot, const std::filesystem::path& path, const VerifierConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open event log " + path.string());
  return replay_log(snapshot, in, config);
}

Service::Service(Registry& registry, VerifierConfig config, ClockMode mode, EventLog* log, Clock clock)
    : registry_(registry), config_(config), mode_(mode), log_(log), clock_(std::move(clock)) {
  if (!clock_) clock_ = system_clock_now;
}

std::string Service::handle_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  AuthRequest req;
  try {
    req = parse_request(line);
  } catch (const ProtocolError& e) {
    return error_line(e.what());
  }
  Instant at;
  if (mode_ == ClockMode::simulated) {
    if (!req.at) return error_line("missing field 'at' (simulated clock)");
    at = *req.at;
  } else {
    at = clock_();
  }
  auto outcome = registry_.verify(req.customer_id, std::string_view(req.static_credential), req.otp, at, config_,
                                  [&](const VerifyOutcome& out) {
                                    if (log_) log_->append(at, req.customer_id, out);
                                  });
  return result_line(outcome);
}

void serve_stream(Service& service, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << service.handle_line(line) << '\n';
    out.flush();
  }
}

Instant system_clock_now() {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return Instant(std::chrono::duration_cast<std::chrono::seconds>(now).count());
}

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void serve_connection(Service& service, int fd, const std::atomic<bool>& stopping) {
  std::string buffer;
  char chunk[4096];
  while (!stopping.load()) {
    pollfd p{fd, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    bool ok = true;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      const std::string frame = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (frame.empty()) continue;
      if (!send_all(fd, service.handle_line(frame) + "\n")) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
  }
  ::close(fd);
}

}  // namespace

TcpServer::TcpServer(Service& service, const std::string& host, std::uint16_t port) : service_(service) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::invalid_argument("bad listen address '" + host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw std::runtime_error("bind/listen on " + host + ":" + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::run() {
  std::vector<std::thread> workers;
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back(serve_connection, std::ref(service_), fd, std::cref(stopping_));
  }
  for (auto& w : workers) w.join();
}

void TcpServer::stop() { stopping_.store(true); }

}  // namespace otpforge::authd
