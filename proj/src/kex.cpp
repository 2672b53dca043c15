#include "rackkex/kex.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "rackkex/descriptors.hpp"

namespace rackkex::kex {

namespace {

Bytes compute_params_hash(const Bytes& descriptor_bytes,
                          const std::vector<rackcore::RackElement>& generators) {
  Bytes data = descriptor_bytes;
  put_u32be(data, static_cast<std::uint32_t>(generators.size()));
  for (const auto& g : generators) put_lp_bytes(data, g.canonical());
  return crypto::sha256(data);
}

PublicParams finish_params(const nlohmann::json& descriptor,
                           std::vector<rackcore::RackElement> generators) {
  if (generators.empty()) throw Error("need at least one public generator");
  PublicParams p;
  p.descriptor = descriptors::canonical_descriptor(descriptor);
  p.rack = descriptors::rack_from_descriptor(p.descriptor);
  for (const auto& g : generators) {
    if (!p.rack->contains(g)) throw Error("generator is not a member of the rack");
  }
  p.generators = std::move(generators);
  const auto dbytes = str_bytes(p.descriptor.dump());
  p.descriptor_hash = crypto::sha256(dbytes);
  p.params_hash = compute_params_hash(dbytes, p.generators);
  return p;
}

}  // namespace

PublicParams make_params(const nlohmann::json& descriptor,
                         const std::vector<std::string>& generator_texts) {
  auto rack = descriptors::rack_from_descriptor(descriptor);
  std::vector<rackcore::RackElement> gens;
  gens.reserve(generator_texts.size());
  for (const auto& s : generator_texts) gens.push_back(rack->parse_element(s));
  return finish_params(descriptor, std::move(gens));
}

PublicParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rack") || !j.contains("generators")) {
    throw Error("params file needs 'rack' and 'generators' fields");
  }
  const auto& gens = j.at("generators");
  if (!gens.is_array()) throw Error("'generators' must be an array of element texts");
  std::vector<std::string> texts;
  for (const auto& g : gens) {
    if (!g.is_string()) throw Error("'generators' must be an array of element texts");
    texts.push_back(g.get<std::string>());
  }
  return make_params(j.at("rack"), texts);
}

nlohmann::ordered_json params_to_json(const PublicParams& params) {
  nlohmann::ordered_json j;
  j["rack"] = params.descriptor;
  auto texts = nlohmann::ordered_json::array();
  for (const auto& g : params.generators) texts.push_back(params.rack->element_text(g));
  j["generators"] = texts;
  return j;
}

PublicParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open params file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed params file " + path + ": " + e.what());
  }
  return params_from_json(j);
}

void save_params(const PublicParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write params file: " + path);
  out << params_to_json(params).dump(2) << "\n";
}

KeyPair keygen(const PublicParams& params, Rng& rng) {
  KeyPair kp{SecretKey{params.rack->sample(rng)}, {}};
  kp.images = images_of(params, kp.sk.a);
  return kp;
}

std::vector<Bytes> images_of(const PublicParams& params, const rackcore::RackElement& a) {
  std::vector<Bytes> images;
  images.reserve(params.generators.size());
  for (const auto& x : params.generators) {
    images.push_back(params.rack->op(a, x).canonical());
  }
  return images;
}

Bytes certificate_body(const Certificate& cert) {
  Bytes body;
  put_u32be(body, cert.version);
  put_lp_bytes(body, str_bytes(cert.identity));
  put_bytes(body, cert.params_hash);
  for (const auto& image : cert.images) put_lp_bytes(body, image);
  return body;
}

Certificate issue_cert(const crypto::SigningKey& ttp, const std::string& identity,
                       const PublicParams& params, const std::vector<Bytes>& images) {
  if (images.size() != params.generators.size()) {
    throw Error("certificate image count does not match the parameters");
  }
  Certificate cert;
  cert.identity = identity;
  cert.params_hash = params.params_hash;
  cert.images = images;
  cert.signature = crypto::sign_detached(ttp, certificate_body(cert));
  return cert;
}

bool verify_cert(const Bytes& ttp_public, const Certificate& cert, const PublicParams& params) {
  if (cert.params_hash.size() != crypto::kHashSize) return false;
  if (cert.params_hash != params.params_hash) return false;
  if (cert.images.size() != params.generators.size()) return false;
  if (cert.signature.size() != crypto::kSignatureSize) return false;
  return crypto::verify_detached(ttp_public, certificate_body(cert), cert.signature);
}

nlohmann::ordered_json certificate_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["version"] = cert.version;
  j["identity"] = cert.identity;
  j["params_hash"] = to_hex(cert.params_hash);
  auto images = nlohmann::ordered_json::array();
  for (const auto& image : cert.images) images.push_back(to_base64(image));
  j["images"] = images;
  j["signature"] = to_base64(cert.signature);
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate cert;
  try {
    cert.version = j.at("version").get<std::uint32_t>();
    cert.identity = j.at("identity").get<std::string>();
    cert.params_hash = from_hex(j.at("params_hash").get<std::string>());
    for (const auto& image : j.at("images")) {
      cert.images.push_back(from_base64(image.get<std::string>()));
    }
    cert.signature = from_base64(j.at("signature").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed certificate: ") + e.what());
  }
  return cert;
}

std::string certificate_text(const Certificate& cert) {
  return certificate_json(cert).dump(2) + "\n";
}

Certificate parse_certificate(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed certificate: ") + e.what());
  }
  return certificate_from_json(j);
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open certificate file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_certificate(buffer.str());
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write certificate file: " + path);
  out << certificate_text(cert);
}

namespace {

std::uint32_t build_random_tree(RackWord& w, std::uint32_t t, std::uint32_t depth, Rng& rng) {
  if (depth == 0 || rng.below(3) == 0) {
    w.nodes.push_back({RackWord::Node::Kind::Leaf, rng.below(t), 0});
  } else {
    const auto a = build_random_tree(w, t, depth - 1, rng);
    const auto b = build_random_tree(w, t, depth - 1, rng);
    const auto kind = rng.coin() ? RackWord::Node::Kind::Op : RackWord::Node::Kind::Ldiv;
    w.nodes.push_back({kind, a, b});
  }
  return static_cast<std::uint32_t>(w.nodes.size() - 1);
}

}  // namespace

RackWord random_slp(std::uint32_t t, std::uint32_t max_depth, Rng& rng) {
  if (t == 0) throw Error("need at least one generator");
  RackWord w;
  build_random_tree(w, t, max_depth, rng);
  return w;
}

RackWord random_group_word(std::uint32_t t, std::uint32_t max_len, Rng& rng) {
  if (t == 0) throw Error("need at least one generator");
  if (max_len == 0) throw Error("word length bound must be positive");
  RackWord w;
  for (int attempt = 0; attempt < 16; ++attempt) {
    words::Word candidate;
    const auto len = 1 + rng.below(max_len);
    for (std::uint32_t i = 0; i < len; ++i) {
      candidate = candidate * words::Word::generator(rng.below(t), rng.coin() ? 1 : -1);
    }
    if (!candidate.identity()) {
      w.group_word = candidate;
      return w;
    }
  }
  w.group_word = words::Word::generator(rng.below(t));
  return w;
}

namespace {

void append_slp_text(std::string& out, const RackWord& w, std::uint32_t node) {
  const auto& n = w.nodes.at(node);
  switch (n.kind) {
    case RackWord::Node::Kind::Leaf:
      out += "x" + std::to_string(n.a + 1);
      break;
    case RackWord::Node::Kind::Op:
    case RackWord::Node::Kind::Ldiv:
      out += n.kind == RackWord::Node::Kind::Op ? "OP(" : "LDIV(";
      append_slp_text(out, w, n.a);
      out += ", ";
      append_slp_text(out, w, n.b);
      out += ")";
      break;
  }
}

struct SlpParser {
  std::string_view s;
  std::size_t pos = 0;
  std::uint32_t t;
  RackWord& w;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (s.substr(pos, token.size()) != token) return false;
    pos += token.size();
    return true;
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) {
      throw Error(std::string("expected '") + c + "' in expression");
    }
    ++pos;
  }

  std::uint32_t parse_node() {
    skip_ws();
    if (accept("OP(")) {
      return parse_binary(RackWord::Node::Kind::Op);
    }
    if (accept("LDIV(")) {
      return parse_binary(RackWord::Node::Kind::Ldiv);
    }
    return parse_leaf();
  }

  std::uint32_t parse_binary(RackWord::Node::Kind kind) {
    const auto a = parse_node();
    expect(',');
    const auto b = parse_node();
    expect(')');
    w.nodes.push_back({kind, a, b});
    return static_cast<std::uint32_t>(w.nodes.size() - 1);
  }

  std::uint32_t parse_leaf() {
    skip_ws();
    if (pos >= s.size() || s[pos] != 'x') throw Error("expected a leaf like x1");
    ++pos;
    std::uint32_t value = 0;
    bool any = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      value = value * 10 + (s[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any || value == 0) throw Error("leaf indices start at x1");
    if (value > t) throw Error("leaf index exceeds the generator count");
    w.nodes.push_back({RackWord::Node::Kind::Leaf, value - 1, 0});
    return static_cast<std::uint32_t>(w.nodes.size() - 1);
  }
};

}  // namespace

std::string rack_word_text(const RackWord& w) {
  if (w.is_group_word()) {
    words::Alphabet names;
    // Group-word letters index the generators; display them as x1, x2, ...
    const auto& word = *w.group_word;
    std::uint32_t max_index = 0;
    for (const auto& l : word.letters()) max_index = std::max(max_index, l.index);
    for (std::uint32_t i = 0; i <= max_index; ++i) names.add("x" + std::to_string(i + 1));
    return "w:" + words::text(word, names);
  }
  if (w.nodes.empty()) throw Error("empty expression");
  std::string out;
  append_slp_text(out, w, static_cast<std::uint32_t>(w.nodes.size() - 1));
  return out;
}

RackWord parse_rack_word(std::string_view text, std::uint32_t t) {
  RackWord w;
  std::size_t begin = 0;
  while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  if (text.substr(begin, 2) == "w:") {
    words::Alphabet names;
    for (std::uint32_t i = 0; i < t; ++i) names.add("x" + std::to_string(i + 1));
    w.group_word = words::parse_word(text.substr(begin + 2), names, false);
    if (w.group_word->identity()) throw Error("group word must be nonempty");
    return w;
  }
  SlpParser parser{text, begin, t, w};
  parser.parse_node();
  parser.skip_ws();
  if (parser.pos != text.size()) throw Error("trailing input after expression");
  return w;
}

RackWordValue eval_rack_word(const RackWord& w, const rackcore::Rack& X,
                             const std::vector<rackcore::RackElement>& leaves) {
  if (w.is_group_word()) {
    const auto* model = X.conjugation_model();
    if (!model) throw Error("group-word expressions need a conjugation rack");
    auto acc = model->identity();
    for (const auto& l : w.group_word->letters()) {
      if (l.index >= leaves.size()) throw Error("leaf index exceeds the generator count");
      const auto& g = leaves[l.index];
      acc = model->mul(acc, l.sign > 0 ? g : model->inv(g));
    }
    return {acc, true};
  }
  if (w.nodes.empty()) throw Error("empty expression");
  std::vector<rackcore::RackElement> values;
  values.reserve(w.nodes.size());
  for (const auto& n : w.nodes) {
    switch (n.kind) {
      case RackWord::Node::Kind::Leaf:
        if (n.a >= leaves.size()) throw Error("leaf index exceeds the generator count");
        values.push_back(leaves[n.a]);
        break;
      case RackWord::Node::Kind::Op:
      case RackWord::Node::Kind::Ldiv: {
        if (n.a >= values.size() || n.b >= values.size()) {
          throw Error("expression node references a later node");
        }
        const auto& a = values[n.a];
        const auto& b = values[n.b];
        values.push_back(n.kind == RackWord::Node::Kind::Op ? X.op(a, b) : X.ldiv(a, b));
        break;
      }
    }
  }
  return {values.back(), false};
}

rackcore::RackElement apply_rack_word(const RackWordValue& v, const rackcore::Rack& X,
                                      const rackcore::RackElement& x) {
  if (v.group) {
    const auto* model = X.conjugation_model();
    if (!model) throw Error("group-word expressions need a conjugation rack");
    return model->conj(v.value, x);
  }
  return X.op(v.value, x);
}

InitiatorState initiate(const PublicParams& params, const SecretKey& sk, Rng& rng) {
  if (!params.rack->contains(sk.a)) throw Error("secret key is not a member of the rack");
  auto x = params.rack->sample(rng);
  auto phi_a_x = params.rack->op(sk.a, x);
  return InitiatorState{sk.a, Message1{std::move(x), std::move(phi_a_x)}};
}

ResponderResult respond(const PublicParams& params, const Certificate& cert_a,
                        const RackWord& b, const Message1& msg1) {
  if (cert_a.params_hash != params.params_hash) {
    throw Error("certificate was issued for different parameters");
  }
  if (cert_a.images.size() != params.generators.size()) {
    throw Error("certificate image count does not match the parameters");
  }
  if (!params.rack->contains(msg1.x) || !params.rack->contains(msg1.phi_a_x)) {
    throw Error("message element is not a member of the rack");
  }
  std::vector<rackcore::RackElement> images;
  images.reserve(cert_a.images.size());
  for (const auto& bytes : cert_a.images) {
    images.push_back(params.rack->element_from_bytes(bytes));
  }

  // b evaluated over the true generators acts on x; the same expression
  // evaluated over the certified images is φ_a(b), so acting with it on
  // φ_a(x) lands on Alice's φ_a φ_b(x).
  const auto b_true = eval_rack_word(b, *params.rack, params.generators);
  const auto b_image = eval_rack_word(b, *params.rack, images);
  ResponderResult out{{apply_rack_word(b_true, *params.rack, msg1.x)},
                      apply_rack_word(b_image, *params.rack, msg1.phi_a_x)};
  return out;
}

rackcore::RackElement finalize(const InitiatorState& state, const PublicParams& params,
                               const Message2& msg2) {
  if (!params.rack->contains(msg2.phi_b_x)) {
    throw Error("message element is not a member of the rack");
  }
  return params.rack->op(state.a, msg2.phi_b_x);
}

Bytes message1_bytes(const Message1& m) {
  Bytes out;
  put_lp_bytes(out, m.x.canonical());
  put_lp_bytes(out, m.phi_a_x.canonical());
  return out;
}

Bytes message2_bytes(const Message2& m) {
  Bytes out;
  put_lp_bytes(out, m.phi_b_x.canonical());
  return out;
}

Bytes transcript_hash(const Message1& m1, const Message2& m2) {
  Bytes data = message1_bytes(m1);
  put_bytes(data, message2_bytes(m2));
  return crypto::sha256(data);
}

Bytes kdf(const rackcore::RackElement& secret, const Bytes& params_hash,
          const Bytes& transcript_hash) {
  Bytes data = str_bytes("RACK-KEX-v1");
  put_bytes(data, params_hash);
  put_bytes(data, transcript_hash);
  put_bytes(data, secret.canonical());
  return crypto::sha256(data);
}

Bytes confirm_mac(const Bytes& session_key, char role) {
  if (role != 'I' && role != 'R') throw Error("confirm role must be 'I' or 'R'");
  auto data = str_bytes("confirm");
  data.push_back(static_cast<std::uint8_t>(role));
  return crypto::hmac_sha256(session_key, data);
}

std::vector<rackcore::RackElement> brute_force_secret(const PublicParams& params,
                                                      const std::vector<Bytes>& images) {
  const auto* finite = dynamic_cast<const rackcore::FiniteRack*>(params.rack.get());
  if (!finite) throw Error("attack oracle needs an enumerable rack");
  if (images.size() != params.generators.size()) {
    throw Error("image count does not match the parameters");
  }
  std::vector<rackcore::RackElement> out;
  for (std::uint32_t i = 0; i < finite->size(); ++i) {
    const auto& candidate = finite->element(i);
    bool consistent = true;
    for (std::size_t j = 0; j < images.size(); ++j) {
      if (finite->op(candidate, params.generators[j]).canonical() != images[j]) {
        consistent = false;
        break;
      }
    }
    if (consistent) out.push_back(candidate);
  }
  return out;
}

std::optional<std::string> check_params(const PublicParams& params, Rng& rng) {
  const auto* finite = dynamic_cast<const rackcore::FiniteRack*>(params.rack.get());
  if (!finite || finite->size() >= 10000) return std::nullopt;
  const auto kp = keygen(params, rng);
  const auto consistent = brute_force_secret(params, kp.images);
  if (consistent.size() <= 1) return std::nullopt;
  return "degenerate parameters: a random key's consistency set has " +
         std::to_string(consistent.size()) + " of " + std::to_string(finite->size()) +
         " elements";
}

}  // namespace rackkex::kex
