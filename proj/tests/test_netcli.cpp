#include <doctest.h>

#include <sstream>
#include <string>

#include "catalog.hpp"
#include "rackkex/crypto.hpp"
#include "rackkex/descriptors.hpp"
#include "rackkex/kex.hpp"
#include "rackkex/netcli.hpp"
#include "rackkex/rackcore.hpp"

using namespace rackkex;
using namespace rackkex::netcli;
using namespace rackkex::rackcore;

namespace {

kex::PublicParams r7_params() {
  return kex::make_params(descriptors::table_descriptor(dihedral_table(7)), {"0", "1"});
}

crypto::SigningKey test_ttp() {
  Bytes seed(crypto::kSeedSize, std::uint8_t{3});
  return crypto::signing_key_from_seed(seed);
}

struct Fixture {
  kex::PublicParams params = r7_params();
  crypto::SigningKey ttp = test_ttp();
  kex::KeyPair kp;
  kex::Certificate cert;

  Fixture() : kp(make_keys()), cert(kex::issue_cert(ttp, "alice", params, kp.images)) {}

  kex::KeyPair make_keys() {
    Rng rng(17);
    return kex::keygen(params, rng);
  }

  ResponderConfig config(std::ostream* log = nullptr) const {
    ResponderConfig c;
    c.params = params;
    c.ttp_public = ttp.public_key;
    c.seed = 99;
    c.log = log;
    return c;
  }
};

}  // namespace

TEST_CASE("frames carry a length prefix and reject oversized bodies") {
  nlohmann::ordered_json body;
  body["type"] = "hello";
  body["n"] = 5;
  const Bytes frame = encode_frame(body);
  REQUIRE(frame.size() > 4);
  CHECK(frame[0] == 0);
  const auto decoded = decode_frame(frame);
  CHECK(decoded.at("type") == "hello");
  CHECK(decoded.at("n") == 5);

  Bytes oversized;
  put_u32be(oversized, kMaxFrameSize + 1);
  CHECK_THROWS(decode_frame(oversized));

  Bytes truncated = frame;
  truncated.pop_back();
  CHECK_THROWS(decode_frame(truncated));

  Bytes garbage;
  put_u32be(garbage, 3);
  put_bytes(garbage, str_bytes("{{{"));
  CHECK_THROWS(decode_frame(garbage));
}

TEST_CASE("loopback handshake produces matching fingerprints") {
  Fixture fx;
  std::ostringstream server_log;
  Server server(fx.config(&server_log), "127.0.0.1", 0);
  server.start();

  std::ostringstream client_log;
  const auto outcome =
      run_initiator("127.0.0.1", server.port(), fx.params, fx.kp.sk, fx.cert, 41, &client_log);
  CHECK(outcome.session_key.size() == crypto::kHashSize);
  CHECK(outcome.fingerprint == key_fingerprint(outcome.session_key));
  CHECK(outcome.fingerprint.size() == 8);

  server.stop();
  CHECK(server_log.str().find("established") != std::string::npos);
  CHECK(server_log.str().find("alice") != std::string::npos);
  CHECK(server_log.str().find(outcome.fingerprint) != std::string::npos);
  CHECK(client_log.str().find(outcome.fingerprint) != std::string::npos);
}

TEST_CASE("several sessions against one server all succeed") {
  Fixture fx;
  Server server(fx.config(), "127.0.0.1", 0);
  server.start();
  for (int session = 0; session < 5; ++session) {
    const auto outcome = run_initiator("127.0.0.1", server.port(), fx.params, fx.kp.sk, fx.cert,
                                       100 + session, nullptr);
    CHECK(outcome.session_key.size() == crypto::kHashSize);
  }
  server.stop();
}

TEST_CASE("a fixed responder expression still yields matching keys") {
  Fixture fx;
  auto config = fx.config();
  config.static_b = kex::parse_rack_word("OP(x1, x2)", fx.params.t());
  Server server(std::move(config), "127.0.0.1", 0);
  server.start();
  const auto outcome =
      run_initiator("127.0.0.1", server.port(), fx.params, fx.kp.sk, fx.cert, 7, nullptr);
  CHECK(outcome.session_key.size() == crypto::kHashSize);
  server.stop();
}

TEST_CASE("responder rejects a params mismatch with a typed error") {
  Fixture fx;
  Server server(fx.config(), "127.0.0.1", 0);
  server.start();

  const auto other =
      kex::make_params(descriptors::table_descriptor(dihedral_table(9)), {"0", "1"});
  Rng rng(5);
  const auto kp = kex::keygen(other, rng);
  const auto cert = kex::issue_cert(fx.ttp, "mallory", other, kp.images);
  CHECK_THROWS_WITH_AS(
      run_initiator("127.0.0.1", server.port(), other, kp.sk, cert, 8, nullptr),
      "peer reported params_mismatch: parameters do not match", Error);
  server.stop();
}

TEST_CASE("responder rejects a bad certificate") {
  Fixture fx;
  Server server(fx.config(), "127.0.0.1", 0);
  server.start();
  auto cert = fx.cert;
  cert.identity = "eve";  // signature no longer covers the body
  try {
    run_initiator("127.0.0.1", server.port(), fx.params, fx.kp.sk, cert, 9, nullptr);
    FAIL("expected a certificate rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cert_invalid") != std::string::npos);
  }
  server.stop();
}

TEST_CASE("raw frames exercise the responder's error codes") {
  Fixture fx;
  Server server(fx.config(), "127.0.0.1", 0);
  server.start();

  auto expect_error = [&](const nlohmann::ordered_json& hello, const std::string& code) {
    Connection conn = dial("127.0.0.1", server.port());
    conn.send(hello);
    const auto reply = conn.receive();
    CHECK(reply.at("type") == "error");
    CHECK(reply.at("code") == code);
  };

  nlohmann::ordered_json wrong_type;
  wrong_type["type"] = "greeting";
  expect_error(wrong_type, "bad_request");

  nlohmann::ordered_json bad_hash;
  bad_hash["type"] = "hello";
  bad_hash["params_hash"] = "zz";
  bad_hash["cert"] = kex::certificate_json(fx.cert);
  bad_hash["x"] = to_base64(fx.params.generators[0].canonical());
  bad_hash["phi_a_x"] = to_base64(fx.kp.images[0]);
  expect_error(bad_hash, "bad_request");

  nlohmann::ordered_json stale;
  stale["type"] = "hello";
  stale["params_hash"] = to_hex(Bytes(32, std::uint8_t{1}));
  stale["cert"] = kex::certificate_json(fx.cert);
  stale["x"] = to_base64(fx.params.generators[0].canonical());
  stale["phi_a_x"] = to_base64(fx.kp.images[0]);
  expect_error(stale, "params_mismatch");

  nlohmann::ordered_json bad_element;
  bad_element["type"] = "hello";
  bad_element["params_hash"] = to_hex(fx.params.params_hash);
  bad_element["cert"] = kex::certificate_json(fx.cert);
  bad_element["x"] = to_base64(str_bytes("not an element"));
  bad_element["phi_a_x"] = to_base64(fx.kp.images[0]);
  expect_error(bad_element, "bad_element");

  server.stop();
}

TEST_CASE("a wrong confirmation MAC is refused") {
  Fixture fx;
  Server server(fx.config(), "127.0.0.1", 0);
  server.start();

  Rng rng(21);
  const auto st = kex::initiate(fx.params, fx.kp.sk, rng);
  Connection conn = dial("127.0.0.1", server.port());
  nlohmann::ordered_json hello;
  hello["type"] = "hello";
  hello["params_hash"] = to_hex(fx.params.params_hash);
  hello["cert"] = kex::certificate_json(fx.cert);
  hello["x"] = to_base64(st.msg1.x.canonical());
  hello["phi_a_x"] = to_base64(st.msg1.phi_a_x.canonical());
  conn.send(hello);
  const auto reply = conn.receive();
  REQUIRE(reply.at("type") == "reply");

  nlohmann::ordered_json confirm;
  confirm["type"] = "confirm";
  confirm["mac"] = to_hex(Bytes(32, std::uint8_t{0xee}));
  conn.send(confirm);
  const auto verdict = conn.receive();
  CHECK(verdict.at("type") == "error");
  CHECK(verdict.at("code") == "confirm_mismatch");

  server.stop();
}

TEST_CASE("fingerprints are the leading hex of the key digest") {
  Bytes key(32, std::uint8_t{5});
  CHECK(key_fingerprint(key) == to_hex(crypto::sha256(key)).substr(0, 8));
}
