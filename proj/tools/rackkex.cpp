#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <sodium.h>

#include "rackkex/crypto.hpp"
#include "rackkex/descriptors.hpp"
#include "rackkex/ext.hpp"
#include "rackkex/freerack.hpp"
#include "rackkex/inn.hpp"
#include "rackkex/kex.hpp"
#include "rackkex/netcli.hpp"
#include "rackkex/present.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/thompson.hpp"

namespace {

using namespace rackkex;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed JSON in " + path + ": " + e.what());
  }
}

std::shared_ptr<const rackcore::FiniteRack> load_finite_rack(const std::string& path) {
  auto rack = descriptors::rack_from_descriptor(load_json(path));
  auto finite = std::dynamic_pointer_cast<const rackcore::FiniteRack>(rack);
  if (!finite) throw Error("this command needs a finite rack");
  return finite;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RACKKEX_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error("RACKKEX_SEED must be an unsigned integer");
    }
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Bytes load_hex_file(const std::string& path, std::size_t expected) {
  auto text = slurp(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.pop_back();
  }
  const auto bytes = from_hex(text);
  if (bytes.size() != expected) {
    throw Error(path + ": expected " + std::to_string(expected) + " hex-encoded bytes");
  }
  return bytes;
}

int cmd_rack_check(const std::string& file) {
  const auto d = descriptors::canonical_descriptor(load_json(file));
  rackcore::TableCandidate t;
  if (d.at("type") == "table") {
    // Check the raw table: a failing one must still produce a report, and
    // building the rack would refuse it up front.
    t.n = d.at("n").get<std::uint32_t>();
    t.table = d.at("table").get<std::vector<std::vector<std::uint32_t>>>();
  } else {
    auto finite = std::dynamic_pointer_cast<const rackcore::FiniteRack>(
        descriptors::rack_from_descriptor(d));
    if (!finite) throw Error("this command needs a finite rack");
    t = rackcore::table_of(*finite);
  }
  const auto report = rackcore::check_rack_axioms(t);
  std::string line;
  if (report.a1_ok) {
    line += "A1 ok";
  } else {
    const auto& w = *report.a1_witness;
    line += "A1 fail(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "," +
            std::to_string(w[2]) + ")";
  }
  line += report.a2_ok ? " A2 ok" : " A2 fail(row " + std::to_string(*report.a2_witness) + ")";
  if (report.a3_ok) {
    line += " A3 ok";
  } else {
    line += " A3 fail(" + std::to_string(*report.a3_witness) + ")";
  }
  if (report.quandle()) {
    line += " (quandle)";
  } else if (report.rack()) {
    line += " (rack)";
  } else {
    line += " (not a rack)";
  }
  std::cout << line << "\n";
  return report.rack() ? 0 : 2;
}

int cmd_rack_inn(const std::string& file) {
  const auto rack = load_finite_rack(file);
  const auto group = inn::inn_group(*rack);
  const bool connected = inn::is_connected(*rack);
  std::cout << "order " << group.order() << ", " << (connected ? "connected" : "disconnected")
            << "\n";

  std::vector<permgroups::Perm> gens;
  for (std::uint32_t a = 0; a < rack->size(); ++a) gens.push_back(inn::phi(*rack, a));
  std::vector<bool> seen(rack->size(), false);
  std::vector<std::size_t> sizes;
  for (std::uint32_t p = 0; p < rack->size(); ++p) {
    if (seen[p]) continue;
    const auto orb = permgroups::orbit(gens, p);
    for (auto q : orb) seen[q] = true;
    sizes.push_back(orb.size());
  }
  std::cout << "orbit sizes:";
  for (auto s : sizes) std::cout << " " << s;
  std::cout << "\n";
  return 0;
}

int cmd_rack_env(const std::string& file) {
  const auto rack = load_finite_rack(file);
  std::cout << present::emit_text(present::env_from_table(*rack)) << "\n";
  return 0;
}

int cmd_rack_present_inn(const std::string& file, std::size_t max_len) {
  const auto rack = load_finite_rack(file);
  std::cout << present::emit_text(present::present_operator_group(*rack, max_len)) << "\n";
  return 0;
}

int cmd_ext_validate(const std::string& file) {
  const auto d = descriptors::canonical_descriptor(load_json(file));
  if (d.at("type") != "extension") throw Error("descriptor is not an extension");
  auto base = std::dynamic_pointer_cast<const rackcore::FiniteRack>(
      descriptors::rack_from_descriptor(d.at("base")));
  if (!base) throw Error("extension base must be a finite rack");

  ext::CocycleFamily alpha;
  alpha.m = base->size();
  alpha.k = d.at("fiber").get<std::uint32_t>();
  alpha.alpha =
      d.at("alpha")
          .get<std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>>>();

  const auto report = ext::validate_cocycle(*base, alpha);
  if (report.rack_valid) {
    std::cout << "cocycle rack conditions: ok\n";
  } else {
    std::cout << "cocycle rack conditions: FAIL (" << report.witness->describe() << ")\n";
    return 2;
  }
  if (report.base_is_quandle) {
    if (report.quandle_valid) {
      std::cout << "quandle diagonal: ok\n";
    } else {
      std::cout << "quandle diagonal: FAIL (" << report.witness->describe() << ")\n";
    }
  } else {
    std::cout << "quandle diagonal: skipped (base is not a quandle)\n";
  }
  return 0;
}

int cmd_ext_reconstruct(const std::string& x_file, const std::string& map_file,
                        const std::string& y_file) {
  const auto X = load_finite_rack(x_file);
  const auto Y = load_finite_rack(y_file);
  const auto map_json = load_json(map_file);
  if (!map_json.is_array()) throw Error("map file must be a JSON array of indices");
  std::vector<std::uint32_t> f;
  for (const auto& v : map_json) {
    if (!v.is_number_unsigned()) throw Error("map entries must be non-negative integers");
    f.push_back(v.get<std::uint32_t>());
  }
  const auto rec = ext::reconstruct_extension(f, *X, *Y);
  std::cout << "fiber size " << rec.alpha.k << "\n";
  std::cout << descriptors::extension_descriptor(load_json(y_file), rec.alpha).dump() << "\n";
  std::cout << "iso:";
  for (auto v : rec.iso) std::cout << " " << v;
  std::cout << "\n";
  return 0;
}

int cmd_kex_params(const std::string& descriptor_file, const std::vector<std::string>& gens,
                   const std::string& out, std::uint64_t seed) {
  const auto params = kex::make_params(load_json(descriptor_file), gens);
  Rng rng(seed);
  if (const auto warning = kex::check_params(params, rng)) {
    std::cerr << "warning: " << *warning << "\n";
  }
  const auto text = kex::params_to_json(params).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    spill(out, text);
    std::cout << "params written to " << out << " (hash " << to_hex(params.params_hash).substr(0, 16)
              << "...)\n";
  }
  return 0;
}

int cmd_ttp_keygen(const std::string& out, const std::string& seed_hex) {
  Bytes seed;
  if (seed_hex.empty()) {
    seed.resize(crypto::kSeedSize);
    randombytes_buf(seed.data(), seed.size());
  } else {
    seed = from_hex(seed_hex);
    if (seed.size() != crypto::kSeedSize) throw Error("seed must be 32 hex-encoded bytes");
  }
  const auto key = crypto::signing_key_from_seed(seed);
  spill(out, to_hex(seed) + "\n");
  spill(out + ".pub", to_hex(key.public_key) + "\n");
  std::cout << "TTP seed written to " << out << ", public key to " << out << ".pub\n";
  return 0;
}

int cmd_kex_keygen(const std::string& params_file, std::uint64_t seed, const std::string& out) {
  const auto params = kex::load_params(params_file);
  Rng rng(seed);
  const auto kp = kex::keygen(params, rng);
  if (const auto warning = kex::check_params(params, rng)) {
    std::cerr << "warning: " << *warning << "\n";
  }
  nlohmann::ordered_json j;
  j["secret"] = params.rack->element_text(kp.sk.a);
  auto images = nlohmann::ordered_json::array();
  for (const auto& image : kp.images) images.push_back(to_base64(image));
  j["images"] = images;
  const auto text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    spill(out, text);
    std::cout << "keypair written to " << out << "\n";
  }
  return 0;
}

std::vector<Bytes> images_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("images") || !j.at("images").is_array()) {
    throw Error("expected a JSON object with an 'images' array");
  }
  std::vector<Bytes> images;
  for (const auto& s : j.at("images")) images.push_back(from_base64(s.get<std::string>()));
  return images;
}

int cmd_cert_issue(const std::string& ttp_seed_file, const std::string& params_file,
                   const std::string& identity, const std::string& keypair_file,
                   const std::string& out) {
  const auto seed = load_hex_file(ttp_seed_file, crypto::kSeedSize);
  const auto key = crypto::signing_key_from_seed(seed);
  const auto params = kex::load_params(params_file);
  const auto images = images_from_json(load_json(keypair_file));
  const auto cert = kex::issue_cert(key, identity, params, images);
  if (out.empty()) {
    std::cout << kex::certificate_text(cert);
  } else {
    kex::save_certificate(cert, out);
    std::cout << "certificate written to " << out << "\n";
  }
  return 0;
}

int cmd_cert_verify(const std::string& ttp_pub_file, const std::string& params_file,
                    const std::string& cert_file) {
  const auto pub = load_hex_file(ttp_pub_file, crypto::kPublicKeySize);
  const auto params = kex::load_params(params_file);
  const auto cert = kex::load_certificate(cert_file);
  if (kex::verify_cert(pub, cert, params)) {
    std::cout << "certificate valid (identity '" << cert.identity << "')\n";
    return 0;
  }
  std::cout << "certificate INVALID\n";
  return 2;
}

int cmd_kex_serve(const std::string& params_file, const std::string& ttp_pub_file,
                  const std::string& addr, std::uint16_t port, const std::string& static_b_file,
                  std::uint64_t seed) {
  netcli::ResponderConfig config;
  config.params = kex::load_params(params_file);
  config.ttp_public = load_hex_file(ttp_pub_file, crypto::kPublicKeySize);
  if (!static_b_file.empty()) {
    auto text = slurp(static_b_file);
    config.static_b = kex::parse_rack_word(text, config.params.t());
  }
  config.seed = seed;
  config.log = &std::cout;
  netcli::Server server(std::move(config), addr, port);
  std::cout << "listening on " << addr << ":" << server.port() << std::endl;
  server.run();
  return 0;
}

int cmd_kex_connect(const std::string& params_file, const std::string& cert_file,
                    const std::string& keypair_file, const std::string& addr, std::uint16_t port,
                    std::uint64_t seed, bool show_key) {
  const auto params = kex::load_params(params_file);
  const auto cert = kex::load_certificate(cert_file);
  const auto keypair = load_json(keypair_file);
  if (!keypair.contains("secret")) throw Error("keypair file is missing the 'secret' field");
  const kex::SecretKey sk{params.rack->parse_element(keypair.at("secret").get<std::string>())};
  const auto outcome = netcli::run_initiator(addr, port, params, sk, cert, seed, &std::cout);
  if (show_key) std::cout << "session key " << to_hex(outcome.session_key) << "\n";
  return 0;
}

int cmd_kex_attack(const std::string& params_file, const std::string& images_file) {
  const auto params = kex::load_params(params_file);
  const auto images = images_from_json(load_json(images_file));
  const auto consistent = kex::brute_force_secret(params, images);
  for (const auto& e : consistent) {
    std::cout << params.rack->element_text(e) << "\n";
  }
  std::cout << "consistency set size " << consistent.size() << "\n";
  return 0;
}

int cmd_fq_canon(const std::string& text, bool embed) {
  words::Alphabet alphabet;
  const auto x = freerack::parse(text, alphabet, true);
  const auto canon = freerack::fq_canonical(x);
  std::cout << freerack::text(canon, alphabet) << "\n";
  if (embed) {
    std::cout << "embed: " << words::text(freerack::fq_embed(canon), alphabet) << "\n";
  }
  return 0;
}

int cmd_thompson_nf(const std::string& word) {
  std::cout << thompson::text(thompson::Element::from_word(words::parse_word_default(word)))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  crypto::init();

  CLI::App app{"rack/quandle algebra toolkit with a rack-based key agreement protocol"};
  app.require_subcommand(1);
  int rc = 0;

  // rack ...
  auto* rack = app.add_subcommand("rack", "finite rack inspection");
  rack->require_subcommand(1);
  {
    static std::string file;
    auto* check = rack->add_subcommand("check", "run the rack axiom checks on a descriptor");
    check->add_option("FILE", file, "rack descriptor file")->required();
    check->callback([&] { rc = cmd_rack_check(file); });

    static std::string inn_file;
    auto* inn_cmd = rack->add_subcommand("inn", "inner automorphism group summary");
    inn_cmd->add_option("FILE", inn_file, "rack descriptor file")->required();
    inn_cmd->callback([&] { rc = cmd_rack_inn(inn_file); });

    static std::string env_file;
    auto* env_cmd = rack->add_subcommand("env", "enveloping group presentation");
    env_cmd->add_option("FILE", env_file, "rack descriptor file")->required();
    env_cmd->callback([&] { rc = cmd_rack_env(env_file); });

    static std::string pi_file;
    static std::size_t max_len = 12;
    auto* pi_cmd = rack->add_subcommand("present-inn", "operator group presentation");
    pi_cmd->add_option("FILE", pi_file, "rack descriptor file")->required();
    pi_cmd->add_option("--max-len", max_len, "walk depth bound (default 12)");
    pi_cmd->callback([&] { rc = cmd_rack_present_inn(pi_file, max_len); });

    auto* ext_cmd = rack->add_subcommand("ext", "extension racks");
    ext_cmd->require_subcommand(1);
    static std::string ext_file;
    auto* validate = ext_cmd->add_subcommand("validate", "check cocycle conditions");
    validate->add_option("FILE", ext_file, "extension descriptor file")->required();
    validate->callback([&] { rc = cmd_ext_validate(ext_file); });

    static std::string rx, rmap, ry;
    auto* rec = ext_cmd->add_subcommand("reconstruct", "recover a cocycle from a surjection");
    rec->add_option("X_FILE", rx, "total rack descriptor")->required();
    rec->add_option("MAP_FILE", rmap, "JSON array mapping X indices to Y indices")->required();
    rec->add_option("Y_FILE", ry, "base rack descriptor")->required();
    rec->callback([&] { rc = cmd_ext_reconstruct(rx, rmap, ry); });
  }

  // kex ...
  auto* kex_cmd = app.add_subcommand("kex", "key agreement protocol");
  kex_cmd->require_subcommand(1);
  {
    static std::string p_desc, p_out;
    static std::vector<std::string> p_gens;
    static std::uint64_t p_seed = 0;
    auto* params_cmd = kex_cmd->add_subcommand("params", "build a params file");
    params_cmd->add_option("DESCRIPTOR", p_desc, "rack descriptor file")->required();
    params_cmd->add_option("--gen", p_gens, "generator element text (repeatable)")->required();
    params_cmd->add_option("--out", p_out, "output file (default stdout)");
    params_cmd->add_option("--seed", p_seed, "seed for the degeneracy check");
    params_cmd->callback([&] {
      rc = cmd_kex_params(p_desc, p_gens, p_out, p_seed ? p_seed : default_seed());
    });

    static std::string t_out = "ttp.seed";
    static std::string t_seed;
    auto* ttp = kex_cmd->add_subcommand("ttp-keygen", "create a TTP signing key");
    ttp->add_option("--out", t_out, "seed file to write (public key goes to OUT.pub)");
    ttp->add_option("--seed", t_seed, "fixed 32-byte seed as hex (testing)");
    ttp->callback([&] { rc = cmd_ttp_keygen(t_out, t_seed); });

    static std::string kg_params, kg_out;
    static std::uint64_t kg_seed = 0;
    auto* kg = kex_cmd->add_subcommand("keygen", "sample a secret and its images");
    kg->add_option("PARAMS", kg_params, "params file")->required();
    kg->add_option("--seed", kg_seed, "rng seed (default RACKKEX_SEED or random)");
    kg->add_option("--out", kg_out, "output file (default stdout)");
    kg->callback([&] { rc = cmd_kex_keygen(kg_params, kg_seed ? kg_seed : default_seed(), kg_out); });

    auto* cert = kex_cmd->add_subcommand("cert", "certificates");
    cert->require_subcommand(1);
    static std::string ci_ttp, ci_params, ci_identity, ci_keypair, ci_out;
    auto* issue = cert->add_subcommand("issue", "sign a certificate");
    issue->add_option("TTP_SEED", ci_ttp, "TTP seed file (hex)")->required();
    issue->add_option("PARAMS", ci_params, "params file")->required();
    issue->add_option("IDENTITY", ci_identity, "identity string")->required();
    issue->add_option("KEYPAIR", ci_keypair, "keygen output file")->required();
    issue->add_option("--out", ci_out, "output file (default stdout)");
    issue->callback([&] { rc = cmd_cert_issue(ci_ttp, ci_params, ci_identity, ci_keypair, ci_out); });

    static std::string cv_pub, cv_params, cv_cert;
    auto* verify = cert->add_subcommand("verify", "verify a certificate");
    verify->add_option("TTP_PUB", cv_pub, "TTP public key file (hex)")->required();
    verify->add_option("PARAMS", cv_params, "params file")->required();
    verify->add_option("CERT", cv_cert, "certificate file")->required();
    verify->callback([&] { rc = cmd_cert_verify(cv_pub, cv_params, cv_cert); });

    static std::string s_params, s_ttp, s_addr = "127.0.0.1", s_static;
    static std::uint16_t s_port = netcli::kDefaultPort;
    static std::uint64_t s_seed = 0;
    auto* serve = kex_cmd->add_subcommand("serve", "run a responder");
    serve->add_option("PARAMS", s_params, "params file")->required();
    serve->add_option("TTP_PUB", s_ttp, "TTP public key file (hex)")->required();
    serve->add_option("--addr", s_addr, "listen address (default 127.0.0.1)");
    serve->add_option("--port", s_port, "listen port (default 46121)");
    serve->add_option("--static-b", s_static, "file with a fixed expression for b");
    serve->add_option("--seed", s_seed, "rng seed for ephemeral b");
    serve->callback([&] {
      rc = cmd_kex_serve(s_params, s_ttp, s_addr, s_port, s_static,
                         s_seed ? s_seed : default_seed());
    });

    static std::string c_params, c_cert, c_keypair, c_addr = "127.0.0.1";
    static std::uint16_t c_port = netcli::kDefaultPort;
    static std::uint64_t c_seed = 0;
    static bool c_show_key = false;
    auto* connect = kex_cmd->add_subcommand("connect", "run an initiator handshake");
    connect->add_option("PARAMS", c_params, "params file")->required();
    connect->add_option("CERT", c_cert, "certificate file for this identity")->required();
    connect->add_option("KEYPAIR", c_keypair, "keygen output file with the secret")->required();
    connect->add_option("--addr", c_addr, "responder address (default 127.0.0.1)");
    connect->add_option("--port", c_port, "responder port (default 46121)");
    connect->add_option("--seed", c_seed, "rng seed for the session");
    connect->add_flag("--show-key", c_show_key, "print the full session key");
    connect->callback([&] {
      rc = cmd_kex_connect(c_params, c_cert, c_keypair, c_addr, c_port,
                           c_seed ? c_seed : default_seed(), c_show_key);
    });

    static std::string a_params, a_images;
    auto* attack = kex_cmd->add_subcommand("attack", "brute-force the consistency set");
    attack->add_option("PARAMS", a_params, "params file")->required();
    attack->add_option("IMAGES", a_images, "file with an 'images' array (keygen or cert)")
        ->required();
    attack->callback([&] { rc = cmd_kex_attack(a_params, a_images); });
  }

  // fq canon
  auto* fq = app.add_subcommand("fq", "free quandle utilities");
  fq->require_subcommand(1);
  {
    static std::string text;
    static bool embed = false;
    auto* canon = fq->add_subcommand("canon", "canonical free-quandle form of (word, symbol)");
    canon->add_option("ELEMENT", text, "element text like \"(b*a, a)\"")->required();
    canon->add_flag("--embed", embed, "also print the embedded group word");
    canon->callback([&] { rc = cmd_fq_canon(text, embed); });
  }

  // thompson nf
  auto* th = app.add_subcommand("thompson", "Thompson's group F utilities");
  th->require_subcommand(1);
  {
    static std::string word;
    auto* nf = th->add_subcommand("nf", "normal form of a word in a0, a1, ...");
    nf->add_option("WORD", word, "word text like \"a0*a2*a0^-1\"")->required();
    nf->callback([&] { rc = cmd_thompson_nf(word); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
