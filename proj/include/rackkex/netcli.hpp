#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rackkex/bytes.hpp"
#include "rackkex/kex.hpp"

namespace rackkex::netcli {

inline constexpr std::uint16_t kDefaultPort = 46121;
inline constexpr std::size_t kMaxFrameSize = 16u * 1024 * 1024;

/// 4-byte big-endian body length, then the JSON body.
Bytes encode_frame(const nlohmann::ordered_json& body);
nlohmann::json decode_frame(const Bytes& frame);

/// Connected TCP stream carrying frames. Owns the descriptor.
class Connection {
 public:
  explicit Connection(int fd);
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection();

  void send(const nlohmann::ordered_json& body);
  /// Blocks for one frame; throws on close, timeout, or oversized length.
  nlohmann::json receive();
  void send_raw(const Bytes& bytes);
  void close();
  int fd() const { return fd_; }

 private:
  int fd_ = -1;
};

Connection dial(const std::string& host, std::uint16_t port);

struct ResponderConfig {
  kex::PublicParams params;
  Bytes ttp_public;                       // 32-byte Ed25519 key for certificates
  std::optional<kex::RackWord> static_b;  // fixed expression; otherwise ephemeral
  std::uint32_t slp_depth = 3;            // ephemeral expression size knobs
  std::uint32_t word_len = 8;
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;
};

/// One handshake per connection; concurrent connections each get a thread.
class Server {
 public:
  Server(ResponderConfig config, const std::string& addr = "127.0.0.1",
         std::uint16_t port = kDefaultPort);
  ~Server();

  std::uint16_t port() const { return port_; }
  /// Accept loop in the calling thread; returns when stop() is called.
  void run();
  /// Accept loop in a background thread.
  void start();
  void stop();

 private:
  void accept_loop();
  void handle_session(Connection conn, std::uint64_t session);

  ResponderConfig config_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};
  std::mutex sessions_mu_;
  std::vector<std::thread> sessions_;
};

struct InitiatorOutcome {
  Bytes session_key;
  std::string fingerprint;
};

/// Full handshake against a responder; throws with the peer's error code on
/// any typed failure.
InitiatorOutcome run_initiator(const std::string& host, std::uint16_t port,
                               const kex::PublicParams& params, const kex::SecretKey& sk,
                               const kex::Certificate& cert, std::uint64_t seed,
                               std::ostream* log = nullptr);

/// First 8 hex characters of SHA-256(session key).
std::string key_fingerprint(const Bytes& session_key);

}  // namespace rackkex::netcli
