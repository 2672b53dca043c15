#include <doctest.h>

#include <cstdio>
#include <set>

#include "catalog.hpp"
#include "rackkex/crypto.hpp"
#include "rackkex/descriptors.hpp"
#include "rackkex/kex.hpp"
#include "rackkex/rackcore.hpp"

using namespace rackkex;
using namespace rackkex::kex;
using namespace rackkex::rackcore;

namespace {

PublicParams r7_params() {
  return make_params(descriptors::table_descriptor(dihedral_table(7)), {"0", "1"});
}

PublicParams s3t_params() {
  return make_params(descriptors::conj_perm_descriptor(3, {"(0 1)", "(1 2)"}),
                     {"(0 1)", "(1 2)"});
}

crypto::SigningKey test_ttp() {
  Bytes seed(crypto::kSeedSize, std::uint8_t{7});
  return crypto::signing_key_from_seed(seed);
}

}  // namespace

TEST_CASE("params pin the descriptor and the generators in the hash") {
  const auto params = r7_params();
  CHECK(params.t() == 2);
  CHECK(params.params_hash.size() == crypto::kHashSize);

  // Independent recomputation of the binding: descriptor bytes, then the
  // generator count, then each generator encoding with a length prefix.
  Bytes manual = descriptors::descriptor_bytes(params.descriptor);
  put_u32be(manual, 2);
  put_lp_bytes(manual, params.generators[0].canonical());
  put_lp_bytes(manual, params.generators[1].canonical());
  CHECK(params.params_hash == crypto::sha256(manual));

  const auto other = make_params(descriptors::table_descriptor(dihedral_table(7)), {"0", "2"});
  CHECK(other.params_hash != params.params_hash);
}

TEST_CASE("params serialize and reload") {
  const auto params = r7_params();
  const auto j = params_to_json(params);
  const auto back = params_from_json(j);
  CHECK(back.params_hash == params.params_hash);
  CHECK(back.t() == 2);

  const std::string path = "test_params_tmp.json";
  save_params(params, path);
  const auto loaded = load_params(path);
  CHECK(loaded.params_hash == params.params_hash);
  std::remove(path.c_str());

  CHECK_THROWS(params_from_json(nlohmann::json::parse(R"({"rack": null})")));
}

TEST_CASE("keygen publishes the images of the generators") {
  const auto params = r7_params();
  Rng rng(1);
  const auto kp = keygen(params, rng);
  REQUIRE(kp.images.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(kp.images[i] == params.rack->op(kp.sk.a, params.generators[i]).canonical());
  }
}

TEST_CASE("certificates verify and any tamper breaks them") {
  const auto params = r7_params();
  const auto ttp = test_ttp();
  Rng rng(2);
  const auto kp = keygen(params, rng);
  const auto cert = issue_cert(ttp, "alice", params, kp.images);

  CHECK(verify_cert(ttp.public_key, cert, params));

  Certificate bad = cert;
  bad.identity = "alicia";
  CHECK_FALSE(verify_cert(ttp.public_key, bad, params));

  bad = cert;
  bad.images[0][0] ^= 1;
  CHECK_FALSE(verify_cert(ttp.public_key, bad, params));

  bad = cert;
  bad.signature[3] ^= 1;
  CHECK_FALSE(verify_cert(ttp.public_key, bad, params));

  // A certificate for different params must not verify against these.
  const auto other = make_params(descriptors::table_descriptor(dihedral_table(9)), {"0", "1"});
  Rng rng2(3);
  const auto kp2 = keygen(other, rng2);
  const auto cert2 = issue_cert(ttp, "alice", other, kp2.images);
  CHECK_FALSE(verify_cert(ttp.public_key, cert2, params));

  CHECK_THROWS(issue_cert(ttp, "alice", params, {kp.images[0]}));  // wrong image count
}

TEST_CASE("certificate body layout is the documented byte string") {
  const auto params = r7_params();
  const auto ttp = test_ttp();
  Rng rng(4);
  const auto kp = keygen(params, rng);
  const auto cert = issue_cert(ttp, "bob", params, kp.images);

  Bytes expected;
  put_u32be(expected, 1);
  put_lp_bytes(expected, str_bytes("bob"));
  put_bytes(expected, params.params_hash);
  for (const auto& image : kp.images) put_lp_bytes(expected, image);
  CHECK(certificate_body(cert) == expected);
}

TEST_CASE("certificates round trip through json and files") {
  const auto params = s3t_params();
  const auto ttp = test_ttp();
  Rng rng(5);
  const auto kp = keygen(params, rng);
  const auto cert = issue_cert(ttp, "carol", params, kp.images);

  CHECK(certificate_from_json(certificate_json(cert)) == cert);
  CHECK(parse_certificate(certificate_text(cert)) == cert);

  const std::string path = "test_cert_tmp.json";
  save_certificate(cert, path);
  CHECK(load_certificate(path) == cert);
  std::remove(path.c_str());
}

TEST_CASE("straight-line programs parse, print and evaluate") {
  const auto params = r7_params();
  const RackWord w = parse_rack_word("OP(x1, LDIV(x2, x1))", params.t());
  CHECK(rack_word_text(w) == "OP(x1, LDIV(x2, x1))");

  std::vector<RackElement> xs = {params.generators[0], params.generators[1]};
  const auto value = eval_rack_word(w, *params.rack, xs);
  const auto expected = params.rack->op(xs[0], params.rack->ldiv(xs[1], xs[0]));
  CHECK(value.value == expected);

  CHECK_THROWS(parse_rack_word("OP(x0, x1)", 2));    // indices are 1-based
  CHECK_THROWS(parse_rack_word("OP(x1, x3)", 2));    // out of range
  CHECK_THROWS(parse_rack_word("OP(x1, x2) junk", 2));
  CHECK_THROWS(parse_rack_word("MUL(x1, x2)", 2));
  CHECK_THROWS(parse_rack_word("w:", 2));
}

TEST_CASE("group words evaluate through the ambient group") {
  const auto params = s3t_params();
  const RackWord w = parse_rack_word("w:x1*x2^-1", params.t());
  CHECK(w.is_group_word());
  CHECK(rack_word_text(w) == "w:x1*x2^-1");

  const auto* model = params.rack->conjugation_model();
  REQUIRE(model != nullptr);
  std::vector<RackElement> xs = {params.generators[0], params.generators[1]};
  const auto value = eval_rack_word(w, *params.rack, xs);
  const auto expected = model->mul(xs[0], model->inv(xs[1]));
  CHECK(value.value == expected);

  // Applying the value conjugates.
  const auto applied = apply_rack_word(value, *params.rack, params.generators[0]);
  CHECK(applied == model->conj(value.value, params.generators[0]));

  // Group words need a conjugation structure; plain tables reject them.
  const auto table_params = r7_params();
  CHECK_THROWS(eval_rack_word(parse_rack_word("w:x1", 2), *table_params.rack,
                              {table_params.generators[0], table_params.generators[1]}));
}

TEST_CASE("random rack words stay inside the rack") {
  const auto params = r7_params();
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const RackWord w = random_slp(params.t(), 3, rng);
    const auto text = rack_word_text(w);
    CHECK(rack_word_text(parse_rack_word(text, params.t())) == text);
    const auto value =
        eval_rack_word(w, *params.rack, {params.generators[0], params.generators[1]});
    CHECK(params.rack->contains(value.value));
  }
}

TEST_CASE("handshake agrees on every catalog style rack") {
  struct Case {
    const char* name;
    PublicParams params;
  };
  std::vector<Case> cases;
  cases.push_back({"R7", r7_params()});
  cases.push_back({"S3 transpositions", s3t_params()});
  cases.push_back({"thompson", make_params(descriptors::thompson_descriptor(6, 8),
                                           {"a0", "a1", "a0*a1^-1"})});

  for (auto& c : cases) {
    CAPTURE(c.name);
    Rng rng(7);
    const auto kp = keygen(c.params, rng);
    for (int session = 0; session < 20; ++session) {
      const auto st = initiate(c.params, kp.sk, rng);
      const RackWord b = c.params.rack->conjugation_model() != nullptr && rng.coin()
                             ? random_group_word(c.params.t(), 6, rng)
                             : random_slp(c.params.t(), 3, rng);
      const auto ttp = test_ttp();
      const auto cert = issue_cert(ttp, "alice", c.params, kp.images);
      const auto rr = respond(c.params, cert, b, st.msg1);
      const auto secret_a = finalize(st, c.params, rr.msg2);
      CHECK(secret_a == rr.secret);

      const auto th = transcript_hash(st.msg1, rr.msg2);
      const auto key_a = kdf(secret_a, c.params.params_hash, th);
      const auto key_b = kdf(rr.secret, c.params.params_hash, th);
      CHECK(key_a == key_b);
      CHECK(key_a.size() == crypto::kHashSize);
    }
  }
}

TEST_CASE("kdf binds params, transcript and secret") {
  const auto params = r7_params();
  Rng rng(8);
  const auto kp = keygen(params, rng);
  const auto st = initiate(params, kp.sk, rng);
  const auto cert = issue_cert(test_ttp(), "alice", params, kp.images);
  const auto rr = respond(params, cert, random_slp(params.t(), 3, rng), st.msg1);

  const auto key = kdf(rr.secret, params.params_hash, transcript_hash(st.msg1, rr.msg2));

  // Recompute from the documented layout.
  Bytes m1;
  put_lp_bytes(m1, st.msg1.x.canonical());
  put_lp_bytes(m1, st.msg1.phi_a_x.canonical());
  CHECK(m1 == message1_bytes(st.msg1));
  Bytes m2;
  put_lp_bytes(m2, rr.msg2.phi_b_x.canonical());
  CHECK(m2 == message2_bytes(rr.msg2));

  Bytes transcript = m1;
  put_bytes(transcript, m2);
  const Bytes th = crypto::sha256(transcript);
  CHECK(th == transcript_hash(st.msg1, rr.msg2));

  Bytes preimage = str_bytes("RACK-KEX-v1");
  put_bytes(preimage, params.params_hash);
  put_bytes(preimage, th);
  put_bytes(preimage, rr.secret.canonical());
  CHECK(key == crypto::sha256(preimage));
}

TEST_CASE("confirmation MACs separate the two roles") {
  Bytes key(32, std::uint8_t{9});
  const auto mi = confirm_mac(key, 'I');
  const auto mr = confirm_mac(key, 'R');
  CHECK(mi != mr);
  CHECK(mi == crypto::hmac_sha256(key, str_bytes("confirmI")));
  CHECK(mr == crypto::hmac_sha256(key, str_bytes("confirmR")));
  CHECK_THROWS(confirm_mac(key, 'X'));
}

TEST_CASE("respond rejects inconsistent inputs") {
  const auto params = r7_params();
  const auto ttp = test_ttp();
  Rng rng(9);
  const auto kp = keygen(params, rng);
  const auto st = initiate(params, kp.sk, rng);
  const auto b = random_slp(params.t(), 3, rng);

  // Certificate bound to different params.
  const auto other = make_params(descriptors::table_descriptor(dihedral_table(9)), {"0", "1"});
  Rng rng2(10);
  const auto kp2 = keygen(other, rng2);
  const auto cert2 = issue_cert(ttp, "alice", other, kp2.images);
  CHECK_THROWS(respond(params, cert2, b, st.msg1));

  // Wrong image count.
  auto cert = issue_cert(ttp, "alice", params, kp.images);
  auto trimmed = cert;
  trimmed.images.pop_back();
  CHECK_THROWS(respond(params, trimmed, b, st.msg1));

  // Message element outside the rack.
  auto msg = st.msg1;
  msg.x = RackElement::table(12);
  CHECK_THROWS(respond(params, cert, b, msg));
}

TEST_CASE("initiate and finalize enforce membership") {
  const auto params = r7_params();
  Rng rng(11);
  CHECK_THROWS(initiate(params, SecretKey{RackElement::table(42)}, rng));
}

TEST_CASE("brute force recovers exactly the secrets with matching images") {
  const auto params = s3t_params();
  // Both generators published: on this quandle the images separate points.
  for (std::uint32_t i = 0; i < 3; ++i) {
    const auto a = std::dynamic_pointer_cast<const FiniteRack>(params.rack)->element(i);
    const auto images = images_of(params, a);
    const auto consistent = brute_force_secret(params, images);
    REQUIRE(consistent.size() == 1);
    CHECK(consistent[0] == a);
  }

  Rng rng(12);
  const auto r7 = r7_params();
  for (int trial = 0; trial < 20; ++trial) {
    const auto kp = keygen(r7, rng);
    const auto consistent = brute_force_secret(r7, kp.images);
    bool found = false;
    for (const auto& cand : consistent) {
      if (cand == kp.sk.a) found = true;
    }
    CHECK(found);
  }

  const auto thompson = make_params(descriptors::thompson_descriptor(4, 6), {"a0", "a1"});
  CHECK_THROWS(brute_force_secret(thompson, {}));
}

TEST_CASE("degenerate parameters are flagged") {
  const auto trivial =
      make_params(descriptors::table_descriptor(trivial_table(4)), {"0", "1"});
  Rng rng(13);
  const auto warning = check_params(trivial, rng);
  REQUIRE(warning.has_value());
  CHECK(warning->find("degenerate") != std::string::npos);

  Rng rng2(14);
  CHECK_FALSE(check_params(r7_params(), rng2).has_value());
}
