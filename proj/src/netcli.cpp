#include "rackkex/netcli.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <utility>

namespace rackkex::netcli {

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw Error(what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const auto n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("send failed");
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

void read_exact(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const auto n = ::recv(fd, data, len, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv failed");
    }
    if (n == 0) throw Error("connection closed mid-frame");
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

void set_receive_timeout(int fd, int seconds) {
  timeval tv{};
  tv.tv_sec = seconds;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

}  // namespace

Bytes encode_frame(const nlohmann::ordered_json& body) {
  const auto text = body.dump();
  if (text.size() > kMaxFrameSize) throw Error("frame body exceeds the size limit");
  Bytes out;
  put_u32be(out, static_cast<std::uint32_t>(text.size()));
  put_bytes(out, str_bytes(text));
  return out;
}

nlohmann::json decode_frame(const Bytes& frame) {
  ByteReader r(frame);
  const auto len = r.u32be();
  if (len > kMaxFrameSize) throw Error("frame length exceeds the size limit");
  const auto body = r.take(len);
  r.done();
  try {
    return nlohmann::json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed frame body: ") + e.what());
  }
}

Connection::Connection(int fd) : fd_(fd) {
  if (fd_ < 0) throw Error("invalid socket");
  set_receive_timeout(fd_, 10);
}

Connection::Connection(Connection&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

Connection::~Connection() { close(); }

void Connection::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Connection::send(const nlohmann::ordered_json& body) { send_raw(encode_frame(body)); }

void Connection::send_raw(const Bytes& bytes) {
  if (fd_ < 0) throw Error("socket is closed");
  write_all(fd_, bytes.data(), bytes.size());
}

nlohmann::json Connection::receive() {
  if (fd_ < 0) throw Error("socket is closed");
  std::uint8_t prefix[4];
  read_exact(fd_, prefix, sizeof(prefix));
  const std::uint32_t len = (std::uint32_t(prefix[0]) << 24) | (std::uint32_t(prefix[1]) << 16) |
                            (std::uint32_t(prefix[2]) << 8) | std::uint32_t(prefix[3]);
  if (len > kMaxFrameSize) throw Error("frame length exceeds the size limit");
  Bytes body(len);
  read_exact(fd_, body.data(), body.size());
  try {
    return nlohmann::json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed frame body: ") + e.what());
  }
}

Connection dial(const std::string& host, std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) sys_fail("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw Error("invalid address: " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const auto err = errno;
    ::close(fd);
    throw Error("connect failed: " + std::string(std::strerror(err)));
  }
  return Connection(fd);
}

namespace {

nlohmann::ordered_json error_frame(const std::string& code, const std::string& detail) {
  nlohmann::ordered_json j;
  j["type"] = "error";
  j["code"] = code;
  j["detail"] = detail;
  return j;
}

/// Thrown inside a session to emit a typed error frame before closing.
struct SessionError {
  std::string code;
  std::string detail;
};

void log_line(std::ostream* log, const std::string& line) {
  if (log) *log << line << "\n" << std::flush;
}

}  // namespace

Server::Server(ResponderConfig config, const std::string& addr, std::uint16_t port)
    : config_(std::move(config)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) sys_fail("socket failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in bind_addr{};
  bind_addr.sin_family = AF_INET;
  bind_addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, addr.c_str(), &bind_addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw Error("invalid address: " + addr);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&bind_addr), sizeof(bind_addr)) != 0) {
    const auto err = errno;
    ::close(listen_fd_);
    throw Error("bind failed: " + std::string(std::strerror(err)));
  }
  if (::listen(listen_fd_, 16) != 0) {
    const auto err = errno;
    ::close(listen_fd_);
    throw Error("listen failed: " + std::string(std::strerror(err)));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Server::~Server() { stop(); }

void Server::run() { accept_loop(); }

void Server::start() {
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (!stopping_.exchange(true)) {
    if (listen_fd_ >= 0) {
      ::shutdown(listen_fd_, SHUT_RDWR);
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> sessions;
  {
    std::lock_guard<std::mutex> lock(sessions_mu_);
    sessions.swap(sessions_);
  }
  for (auto& t : sessions) {
    if (t.joinable()) t.join();
  }
}

void Server::accept_loop() {
  std::uint64_t session = 0;
  while (!stopping_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listener closed by stop()
    }
    ++session;
    std::lock_guard<std::mutex> lock(sessions_mu_);
    sessions_.emplace_back(
        [this, fd, session] { handle_session(Connection(fd), session); });
  }
}

void Server::handle_session(Connection conn, std::uint64_t session) {
  const auto& params = config_.params;
  try {
    nlohmann::json hello;
    try {
      hello = conn.receive();
    } catch (const Error& e) {
      log_line(config_.log, std::string("responder: ") + e.what());
      return;
    }
    if (!hello.is_object() || hello.value("type", "") != "hello") {
      throw SessionError{"bad_request", "expected a hello frame"};
    }

    Bytes peer_params_hash;
    try {
      peer_params_hash = from_hex(hello.value("params_hash", ""));
    } catch (const Error&) {
      throw SessionError{"bad_request", "params_hash is not valid hex"};
    }
    if (peer_params_hash != params.params_hash) {
      throw SessionError{"params_mismatch", "parameters do not match"};
    }

    kex::Certificate cert;
    try {
      cert = kex::certificate_from_json(hello.at("cert"));
    } catch (const std::exception& e) {
      throw SessionError{"cert_invalid", e.what()};
    }
    if (!kex::verify_cert(config_.ttp_public, cert, params)) {
      throw SessionError{"cert_invalid", "certificate verification failed"};
    }

    kex::Message1 msg1 = [&] {
      try {
        auto x = params.rack->element_from_bytes(from_base64(hello.value("x", "")));
        auto ax = params.rack->element_from_bytes(from_base64(hello.value("phi_a_x", "")));
        return kex::Message1{std::move(x), std::move(ax)};
      } catch (const Error& e) {
        throw SessionError{"bad_element", e.what()};
      }
    }();

    // Ephemeral policy: fresh expression per session, group words on
    // infinite conjugation racks, expression trees elsewhere.
    kex::RackWord b;
    if (config_.static_b) {
      b = *config_.static_b;
    } else {
      Rng rng(config_.seed + session);
      if (!params.rack->finite() && params.rack->conjugation_model()) {
        b = kex::random_group_word(params.t(), config_.word_len, rng);
      } else {
        b = kex::random_slp(params.t(), config_.slp_depth, rng);
      }
    }

    kex::ResponderResult result = [&] {
      try {
        return kex::respond(params, cert, b, msg1);
      } catch (const Error& e) {
        throw SessionError{"bad_element", e.what()};
      }
    }();

    nlohmann::ordered_json reply;
    reply["type"] = "reply";
    reply["phi_b_x"] = to_base64(result.msg2.phi_b_x.canonical());
    conn.send(reply);

    const auto key = kex::kdf(result.secret, params.params_hash,
                              kex::transcript_hash(msg1, result.msg2));

    const auto confirm = conn.receive();
    Bytes peer_mac;
    try {
      peer_mac = from_hex(confirm.value("mac", ""));
    } catch (const Error&) {
      throw SessionError{"confirm_mismatch", "confirm MAC is not valid hex"};
    }
    if (confirm.value("type", "") != "confirm" || peer_mac != kex::confirm_mac(key, 'I')) {
      throw SessionError{"confirm_mismatch", "initiator key confirmation failed"};
    }

    nlohmann::ordered_json ours;
    ours["type"] = "confirm";
    ours["mac"] = to_hex(kex::confirm_mac(key, 'R'));
    conn.send(ours);

    log_line(config_.log, "responder: session with '" + cert.identity +
                              "' established, key fingerprint " + key_fingerprint(key));
  } catch (const SessionError& e) {
    try {
      conn.send(error_frame(e.code, e.detail));
    } catch (const Error&) {
      // peer already gone; nothing to report
    }
    log_line(config_.log, "responder: session failed (" + e.code + "): " + e.detail);
  } catch (const std::exception& e) {
    log_line(config_.log, std::string("responder: session failed: ") + e.what());
  }
}

namespace {

[[noreturn]] void fail_from_error_frame(const nlohmann::json& frame) {
  throw Error("peer reported " + frame.value("code", std::string("unknown")) + ": " +
              frame.value("detail", std::string()));
}

}  // namespace

InitiatorOutcome run_initiator(const std::string& host, std::uint16_t port,
                               const kex::PublicParams& params, const kex::SecretKey& sk,
                               const kex::Certificate& cert, std::uint64_t seed,
                               std::ostream* log) {
  auto conn = dial(host, port);
  Rng rng(seed);
  const auto state = kex::initiate(params, sk, rng);

  nlohmann::ordered_json hello;
  hello["type"] = "hello";
  hello["params_hash"] = to_hex(params.params_hash);
  hello["cert"] = kex::certificate_json(cert);
  hello["x"] = to_base64(state.msg1.x.canonical());
  hello["phi_a_x"] = to_base64(state.msg1.phi_a_x.canonical());
  conn.send(hello);

  const auto reply = conn.receive();
  if (reply.value("type", "") == "error") fail_from_error_frame(reply);
  if (reply.value("type", "") != "reply") throw Error("expected a reply frame");
  kex::Message2 msg2{params.rack->element_from_bytes(from_base64(reply.value("phi_b_x", "")))};

  const auto secret = kex::finalize(state, params, msg2);
  const auto key =
      kex::kdf(secret, params.params_hash, kex::transcript_hash(state.msg1, msg2));

  nlohmann::ordered_json confirm;
  confirm["type"] = "confirm";
  confirm["mac"] = to_hex(kex::confirm_mac(key, 'I'));
  conn.send(confirm);

  const auto theirs = conn.receive();
  if (theirs.value("type", "") == "error") fail_from_error_frame(theirs);
  if (theirs.value("type", "") != "confirm" ||
      from_hex(theirs.value("mac", "")) != kex::confirm_mac(key, 'R')) {
    throw Error("responder key confirmation failed");
  }

  InitiatorOutcome out{key, key_fingerprint(key)};
  log_line(log, "initiator: session established, key fingerprint " + out.fingerprint);
  return out;
}

std::string key_fingerprint(const Bytes& session_key) {
  return to_hex(crypto::sha256(session_key)).substr(0, 8);
}

}  // namespace rackkex::netcli
