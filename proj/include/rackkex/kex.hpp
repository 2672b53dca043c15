#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rackkex/bytes.hpp"
#include "rackkex/crypto.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/rng.hpp"
#include "rackkex/words.hpp"

namespace rackkex::kex {

/// The rack plus the published generators x_1 ... x_t.
struct PublicParams {
  nlohmann::ordered_json descriptor;
  std::shared_ptr<const rackcore::Rack> rack;
  std::vector<rackcore::RackElement> generators;
  Bytes descriptor_hash;
  /// SHA-256 over descriptor bytes ‖ generator count ‖ length-prefixed
  /// generator encodings; pins both the rack and the x_i.
  Bytes params_hash;

  std::uint32_t t() const { return static_cast<std::uint32_t>(generators.size()); }
};

/// descriptor + generator element texts
PublicParams make_params(const nlohmann::json& descriptor,
                         const std::vector<std::string>& generator_texts);
PublicParams params_from_json(const nlohmann::json& j);
nlohmann::ordered_json params_to_json(const PublicParams& params);
PublicParams load_params(const std::string& path);
void save_params(const PublicParams& params, const std::string& path);

struct SecretKey {
  rackcore::RackElement a;
};

struct KeyPair {
  SecretKey sk;
  std::vector<Bytes> images;  // canonical bytes of a ▷ x_i
};

KeyPair keygen(const PublicParams& params, Rng& rng);
std::vector<Bytes> images_of(const PublicParams& params, const rackcore::RackElement& a);

struct Certificate {
  std::uint32_t version = 1;
  std::string identity;
  Bytes params_hash;          // 32 bytes
  std::vector<Bytes> images;  // canonical element bytes
  Bytes signature;            // 64-byte detached Ed25519

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// version ‖ length-prefixed identity ‖ params_hash ‖ length-prefixed images
Bytes certificate_body(const Certificate& cert);

Certificate issue_cert(const crypto::SigningKey& ttp, const std::string& identity,
                       const PublicParams& params, const std::vector<Bytes>& images);
bool verify_cert(const Bytes& ttp_public, const Certificate& cert, const PublicParams& params);

/// Fixed-order JSON: version, identity, params_hash (hex), images (base64
/// list), signature (base64). The file form is the same object, indented.
nlohmann::ordered_json certificate_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);
std::string certificate_text(const Certificate& cert);
Certificate parse_certificate(std::string_view text);
Certificate load_certificate(const std::string& path);
void save_certificate(const Certificate& cert, const std::string& path);

/// Bob's ephemeral b as an expression over the generators: either a
/// straight-line program with OP/LDIV nodes over leaves x_1...x_t, or (on
/// conjugation racks only) a free-group word acting as φ_w.
struct RackWord {
  struct Node {
    enum class Kind { Leaf, Op, Ldiv };
    Kind kind = Kind::Leaf;
    std::uint32_t a = 0;  // leaf: generator index; else: left operand node
    std::uint32_t b = 0;  // right operand node
  };
  std::vector<Node> nodes;                // evaluation order; result = last node
  std::optional<words::Word> group_word;  // letters index the generators

  bool is_group_word() const { return group_word.has_value(); }
};

/// Random expression tree of the given depth; leaves uniform over 1..t.
RackWord random_slp(std::uint32_t t, std::uint32_t max_depth, Rng& rng);
/// Random nonempty reduced word of length ≤ max_len over t letters.
RackWord random_group_word(std::uint32_t t, std::uint32_t max_len, Rng& rng);

/// SLP text: `OP(x1, LDIV(x2, x1))`; group-word text: `w:x1*x2^-1`.
std::string rack_word_text(const RackWord& w);
RackWord parse_rack_word(std::string_view text, std::uint32_t t);

/// Evaluated RackWord, ready to act on rack elements. For SLPs the value is
/// a rack element acting by b ▷ ·; for group words it is an ambient group
/// element acting by conjugation.
struct RackWordValue {
  rackcore::RackElement value;
  bool group = false;
};

RackWordValue eval_rack_word(const RackWord& w, const rackcore::Rack& X,
                             const std::vector<rackcore::RackElement>& leaves);
rackcore::RackElement apply_rack_word(const RackWordValue& v, const rackcore::Rack& X,
                                      const rackcore::RackElement& x);

struct Message1 {
  rackcore::RackElement x;
  rackcore::RackElement phi_a_x;
};

struct Message2 {
  rackcore::RackElement phi_b_x;
};

struct InitiatorState {
  rackcore::RackElement a;
  Message1 msg1;
};

/// Alice: pick random x, send x together with a ▷ x.
InitiatorState initiate(const PublicParams& params, const SecretKey& sk, Rng& rng);

struct ResponderResult {
  Message2 msg2;
  rackcore::RackElement secret;
};

/// Bob: answer with b acting on x and derive the shared secret by
/// re-evaluating the same expression over the certified images.
/// The certificate signature must have been verified by the caller; this
/// checks the params binding and element membership.
ResponderResult respond(const PublicParams& params, const Certificate& cert_a,
                        const RackWord& b, const Message1& msg1);

/// Alice: shared secret a ▷ φ_b(x).
rackcore::RackElement finalize(const InitiatorState& state, const PublicParams& params,
                               const Message2& msg2);

Bytes message1_bytes(const Message1& m);
Bytes message2_bytes(const Message2& m);
/// SHA-256 over both protocol messages.
Bytes transcript_hash(const Message1& m1, const Message2& m2);

/// SessionKey = SHA-256("RACK-KEX-v1" ‖ params_hash ‖ transcript_hash ‖
/// canonical secret bytes).
Bytes kdf(const rackcore::RackElement& secret, const Bytes& params_hash,
          const Bytes& transcript_hash);

/// HMAC-SHA-256(key, "confirm" ‖ role), role 'I' or 'R'.
Bytes confirm_mac(const Bytes& session_key, char role);

/// Exact consistency set {a' ∈ X : a' ▷ x_i = images[i] for all i} by full
/// enumeration; the true secret is always a member. Finite racks only.
std::vector<rackcore::RackElement> brute_force_secret(const PublicParams& params,
                                                      const std::vector<Bytes>& images);

/// Degenerate-parameter check: on small enumerable racks, a random keypair
/// whose consistency set is larger than one yields a warning message.
std::optional<std::string> check_params(const PublicParams& params, Rng& rng);

}  // namespace rackkex::kex
