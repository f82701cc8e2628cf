#include "linkcharge/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "linkcharge/error.hpp"
#include "linkcharge/region.hpp"

namespace linkcharge {

namespace {

double number_field(const json& m, const char* key) {
  if (!m.contains(key) || !m.at(key).is_number())
    throw Error(ErrorCode::InvalidArgument, std::string("missing numeric field \"") + key + "\"");
  const double v = m.at(key).get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string("field \"") + key + "\" is not finite");
  return v;
}

json frame(const char* type, ChargePoint c, double E, const Configuration& p) {
  return {{"type", type}, {"s", c.s}, {"t", c.t}, {"E", E}, {"vertices", to_json(p)}};
}

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void serve_connection(int fd, std::string id) {
  Session session(std::move(id));
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string out;
      for (const json& reply : session.handle_line(line)) out += reply.dump() + '\n';
      if (!send_all(fd, out)) {
        ::close(fd);
        return;
      }
    }
  }
  ::close(fd);
}

}  // namespace

json error_frame(const std::string& code, const std::string& message) {
  return {{"type", "error"}, {"code", code}, {"message", message}};
}

Session::Session(std::string id) : id_(std::move(id)), linkage_(Linkage::equilateral(5)) {
  set_minimum(linkage_, fixed_, control_);
}

void Session::set_minimum(const Linkage& l, const FixedCharges& fixed, ChargePoint control) {
  const ChargePath check({control});  // rejects non-positive controls
  (void)check;
  const Minimum m = global_min_convex(l, fixed.with(control));
  linkage_ = l;
  fixed_ = fixed;
  control_ = control;
  configuration_ = m.configuration;
  energy_ = m.E;
}

json Session::state() const {
  json s = frame("state", control_, energy_, configuration_);
  const DiagonalCoords x = diagonals(configuration_);
  s["session"] = id_;
  s["linkage"] = to_json(linkage_);
  s["fixed_charges"] = to_json(fixed_);
  s["b2"] = std::sqrt(x[1]);
  s["b4"] = std::sqrt(x[3]);
  return s;
}

Configuration Session::resolve_target(const json& target) const {
  if (target.is_object() && target.contains("b2")) {
    const Reconstruction r = reconstruct_pentagon(linkage_, number_field(target, "b2"), number_field(target, "b4"));
    if (r.status != ShapeStatus::StrictlyConvex)
      throw Error(ErrorCode::NotConvex, "configuration not strictly convex");
    return r.configuration;
  }
  return configuration_from_json(target);
}

std::vector<json> Session::handle_line(const std::string& line) {
  const json message = json::parse(line, nullptr, false);
  if (message.is_discarded()) return {error_frame("MalformedMessage", "message is not valid JSON")};
  return handle(message);
}

std::vector<json> Session::handle(const json& message) {
  try {
    return dispatch(message);
  } catch (const Error& e) {
    return {error_frame(std::string(to_string(e.code())), e.what())};
  } catch (const json::exception& e) {
    return {error_frame("MalformedMessage", e.what())};
  }
}

std::vector<json> Session::dispatch(const json& m) {
  if (!m.is_object() || !m.contains("type") || !m.at("type").is_string())
    return {error_frame("MalformedMessage", "message needs a string \"type\"")};
  const std::string type = m.at("type").get<std::string>();

  if (type == "hello") {
    return {{{"type", "hello"}, {"session", id_}, {"protocol", 1}}, state()};
  }
  if (type == "get_state") return {state()};
  if (type == "set_linkage") {
    const Linkage l = linkage_from_json(m.contains("sides") ? m.at("sides") : m.value("linkage", json()));
    if (l.size() != 5) throw Error(ErrorCode::InvalidLinkage, "the service controls pentagonal linkages");
    if (is_nongeneric(l)) throw Error(ErrorCode::NongenericLinkage, "linkage is not generic");
    set_minimum(l, fixed_, control_);
    return {state()};
  }
  if (type == "set_charges") {
    set_minimum(linkage_, fixed_, {number_field(m, "s"), number_field(m, "t")});
    return {state()};
  }
  if (type == "set_fixed_charges") {
    set_minimum(linkage_, {number_field(m, "q1"), number_field(m, "q2"), number_field(m, "q4")}, control_);
    return {state()};
  }
  if (type == "stabilize_to") {
    if (!m.contains("target")) throw Error(ErrorCode::InvalidArgument, "missing \"target\"");
    const Configuration target = resolve_target(m.at("target"));
    const auto sol = stabilize_pentagon(target, fixed_.q1, fixed_.q2, fixed_.q4);
    set_minimum(linkage_, fixed_, {sol.s, sol.t});
    return {state()};
  }
  if (type == "navigate") {
    if (!m.contains("target")) throw Error(ErrorCode::InvalidArgument, "missing \"target\"");
    const Configuration target = resolve_target(m.at("target"));
    const double steps = m.contains("steps") ? number_field(m, "steps") : 100.0;
    if (!(steps >= 1.0) || steps != std::floor(steps) || steps > 1e6)
      throw Error(ErrorCode::InvalidArgument, "steps must be a positive integer");
    const Trajectory t = navigate(linkage_, configuration_, target, fixed_, static_cast<std::size_t>(steps));
    std::vector<json> out;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      json f = frame("trajectory_frame", t.steps[i].control, t.steps[i].E, t.steps[i].configuration);
      f["index"] = i;
      out.push_back(std::move(f));
    }
    const auto& last = t.steps.back();
    control_ = last.control;
    configuration_ = last.configuration;
    energy_ = last.E;
    json done = frame("done", control_, energy_, configuration_);
    done["steps"] = t.steps.size();
    done["retries"] = t.retries;
    done["endpoint_error"] = t.endpoint_error;
    out.push_back(std::move(done));
    return out;
  }
  if (type == "get_region") {
    const double grid = m.contains("grid") ? number_field(m, "grid") : 64.0;
    if (!(grid >= 1.0) || grid != std::floor(grid) || grid > 4096)
      throw Error(ErrorCode::InvalidArgument, "grid must be a positive integer");
    const ConvexRegion region(linkage_);
    json slices = json::array();
    const auto n = static_cast<std::size_t>(grid);
    for (std::size_t i = 0; i <= n; ++i) {
      const double k = region.k_at(static_cast<double>(i) / static_cast<double>(n));
      const Slice s = region.slice(k);
      slices.push_back({{"b4", s.k}, {"b2_lo", std::sqrt(s.x2_range.lo)}, {"b2_hi", std::sqrt(s.x2_range.hi)}});
    }
    return {{{"type", "region"},
             {"b4_range", {region.k_range().lo, region.k_range().hi}},
             {"slices", slices}}};
  }
  return {error_frame("MalformedMessage", "unknown message type \"" + type + "\"")};
}

Server::~Server() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::uint16_t Server::bind(std::uint16_t port, bool all_interfaces) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(all_interfaces ? INADDR_ANY : INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
    throw std::runtime_error("bind to port " + std::to_string(port) + " failed: " + std::strerror(errno));
  if (::listen(listen_fd_, 16) < 0) throw std::runtime_error(std::string("listen: ") + std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void Server::run() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) break;
      if (errno == EINTR) continue;
      break;
    }
    std::thread(serve_connection, fd, "session-" + std::to_string(++sessions_)).detach();
  }
}

void Server::stop() {
  stopping_ = true;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
}

}  // namespace linkcharge
