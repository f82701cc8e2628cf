#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "linkcharge/io.hpp"

namespace linkcharge {

/// One client's view of the controlled linkage. The configuration is always
/// the convex minimum for the current charges; a failing message leaves the
/// state unchanged.
class Session {
 public:
  explicit Session(std::string id = "session-0");

  /// Replies to one protocol message, in order.
  std::vector<json> handle(const json& message);
  /// Parses one line; malformed text yields a single error frame.
  std::vector<json> handle_line(const std::string& line);

  json state() const;
  const Configuration& configuration() const { return configuration_; }

 private:
  std::vector<json> dispatch(const json& message);
  void set_minimum(const Linkage& l, const FixedCharges& fixed, ChargePoint control);
  Configuration resolve_target(const json& target) const;

  std::string id_;
  Linkage linkage_;
  FixedCharges fixed_;
  ChargePoint control_;
  Configuration configuration_;
  double energy_ = 0.0;
};

json error_frame(const std::string& code, const std::string& message);

/// Line-delimited JSON over TCP, one thread and one Session per connection.
class Server {
 public:
  Server() = default;
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server();

  /// Binds 127.0.0.1 (or all interfaces) at `port`; 0 picks a free port.
  /// Returns the bound port. Throws std::runtime_error on failure.
  std::uint16_t bind(std::uint16_t port, bool all_interfaces = false);
  /// Accepts connections until stop() is called.
  void run();
  void stop();

 private:
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<int> sessions_{0};
};

}  // namespace linkcharge
