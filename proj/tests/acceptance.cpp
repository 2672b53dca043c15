// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit if
// anything fails. Each criterion is self-contained and uses its own RNG
// seeds so reruns are reproducible.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
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
#include "rackkex/words.hpp"

using namespace rackkex;
namespace rc = rackkex::rackcore;

namespace {

struct Failure {
  std::string detail;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure{what};
}

// ---------------------------------------------------------------- 1 -----

void criterion_axioms() {
  for (std::uint32_t n = 3; n <= 9; ++n) {
    require(rc::check_rack_axioms(rc::dihedral_table(n)).quandle(),
            "R" + std::to_string(n) + " is not a quandle");
  }
  for (std::uint32_t n = 2; n <= 6; ++n) {
    const auto report = rc::check_rack_axioms(rc::cyclic_table(n));
    require(report.rack(), "C" + std::to_string(n) + " is not a rack");
    require(!report.a3_ok, "C" + std::to_string(n) + " unexpectedly idempotent");
  }
  for (const auto& entry : catalog::finite_catalog()) {
    const auto report = rc::check_rack_axioms(rc::table_of(*entry.rack));
    require(report.rack(), entry.name + " fails the rack axioms");
  }

  // Conjugation racks of S3 and S4: full groups and transposition closures.
  require(rc::check_rack_axioms(rc::table_of(*rc::group_rack(catalog::sym(3)))).quandle(),
          "Con(S3) is not a quandle");
  require(rc::check_rack_axioms(rc::table_of(*rc::group_rack(catalog::sym(4)))).quandle(),
          "Con(S4) is not a quandle");
  require(rc::check_rack_axioms(rc::table_of(*catalog::transposition_rack(3))).quandle(),
          "S3 transposition closure is not a quandle");
  require(rc::check_rack_axioms(rc::table_of(*catalog::transposition_rack(4))).quandle(),
          "S4 transposition closure is not a quandle");

  // Extensions built by the suite.
  require(rc::check_rack_axioms(rc::table_of(*catalog::product_ext_r3())).quandle(),
          "R3 x {0,1} is not a quandle");
  require(rc::check_rack_axioms(rc::table_of(*catalog::r6_over_r3_ext())).quandle(),
          "the R6-over-R3 extension is not a quandle");

  // Random single-cell mutations of R5 must be caught.
  Rng rng(1001);
  int detected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto t = rc::dihedral_table(5);
    const std::uint32_t a = rng.below(5);
    const std::uint32_t b = rng.below(5);
    std::uint32_t v = rng.below(5);
    while (v == t.table[a][b]) v = rng.below(5);
    t.table[a][b] = v;
    if (!rc::check_rack_axioms(t).rack()) ++detected;
  }
  require(detected >= 99,
          "only " + std::to_string(detected) + "/100 mutations of R5 were detected");
}

// ---------------------------------------------------------------- 2 -----

void criterion_free_structures() {
  using namespace rackkex::freerack;
  Rng rng(1002);
  auto random_element = [&](std::size_t max_len) {
    return FRElement{catalog::random_word_upto(rng, 3, max_len), rng.below(3)};
  };

  for (int trial = 0; trial < 1000; ++trial) {
    const FRElement x = random_element(6);
    const FRElement y = random_element(6);
    const FRElement z = random_element(6);
    require(fr_op(x, fr_op(y, z)) == fr_op(fr_op(x, y), fr_op(x, z)),
            "free rack left distributivity failed");
    require(fr_ldiv(x, fr_op(x, y)) == y, "fr_ldiv does not invert fr_op");
    require(fr_op(x, fr_ldiv(x, y)) == y, "fr_op does not invert fr_ldiv");
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const FRElement c = fq_canonical(random_element(6));
    require(fq_canonical(c) == c, "fq_canonical is not idempotent");
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const FRElement x = fq_canonical(random_element(5));
    const FRElement y = fq_canonical(random_element(5));
    const words::Word gx = fq_embed(x);
    const words::Word gy = fq_embed(y);
    require(fq_embed(fq_canonical(fr_op(x, y))) == gx * gy * gx.inverse(),
            "fq_embed is not a homomorphism");
  }

  // Exhaustive census: all reduced words of length <= 3 over two symbols.
  std::vector<words::Word> census;
  census.push_back(words::Word());
  std::size_t start = 0;
  for (int len = 1; len <= 3; ++len) {
    const std::size_t end = census.size();
    for (std::size_t i = start; i < end; ++i) {
      for (std::uint32_t idx = 0; idx < 2; ++idx) {
        for (int sign : {1, -1}) {
          const words::Word w = census[i] * words::Word::generator(idx, sign);
          if (w.size() == census[i].size() + 1) census.push_back(w);
        }
      }
    }
    start = end;
  }
  std::set<words::Word> images;
  std::size_t canonical_count = 0;
  for (const auto& w : census) {
    for (std::uint32_t s = 0; s < 2; ++s) {
      const FRElement x{w, s};
      if (!fq_is_canonical(x)) continue;
      ++canonical_count;
      images.insert(fq_embed(x));
    }
  }
  require(canonical_count == 54, "census size changed: " + std::to_string(canonical_count));
  require(images.size() == canonical_count, "fq_embed is not injective on the census");
}

// ---------------------------------------------------------------- 3 -----

void criterion_positivity() {
  Rng rng(1003);
  for (int trial = 0; trial < 10000; ++trial) {
    const words::Word w = catalog::random_word_upto(rng, 4, 12, /*nonempty=*/true);
    const bool p = words::is_positive(w);
    const bool q = words::is_positive(w.inverse());
    require(p != q, "positivity not exactly-one on " + words::text(w));
  }
}

// ---------------------------------------------------------------- 4 -----

void criterion_inn() {
  auto r3 = catalog::table_rack(rc::dihedral_table(3));
  require(inn::inn_group(*r3).order() == 6, "|Inn(R3)| != 6");
  require(inn::is_connected(*r3), "R3 is not connected");

  struct Case {
    const char* name;
    permgroups::PermGroup group;
  };
  const Case cases[] = {
      {"S3", catalog::sym(3)},     {"S4", catalog::sym(4)}, {"A4", catalog::alt4()},
      {"D4", catalog::dih4()},     {"Z4", catalog::cyc4()}, {"Z2xZ2", catalog::klein4()},
  };
  for (const auto& c : cases) {
    const auto report = inn::check_center_kernel(*rc::group_rack(c.group));
    require(report.ok(), std::string(c.name) + ": " + report.witness);
    require(report.inn_order * report.center_size == report.group_order,
            std::string(c.name) + ": |Inn|*|Z| != |G|");
  }

  for (const auto& entry : catalog::finite_catalog()) {
    require(inn::phi_is_rack_hom(*entry.rack), entry.name + ": phi is not a rack hom");
  }
}

// ---------------------------------------------------------------- 5 -----

void criterion_operator_group() {
  for (const auto& entry : catalog::finite_catalog()) {
    const auto harvest = inn::harvest_relations(*entry.rack, 16);
    require(harvest.complete, entry.name + ": walk did not complete");
    require(harvest.reached == inn::inn_group(*entry.rack).order(),
            entry.name + ": reached count != |Inn|");
    for (const auto& relator : harvest.relators) {
      require(inn::phi_word(*entry.rack, relator).is_identity(),
              entry.name + ": harvested relator is not trivial");
    }
  }
}

// ---------------------------------------------------------------- 6 -----

std::vector<rc::TableCandidate> all_racks_of_size(std::uint32_t n) {
  // Every row is a permutation; enumerate row tuples and keep the tables
  // that pass left distributivity.
  std::vector<std::vector<std::uint32_t>> perms;
  std::vector<std::uint32_t> base(n);
  for (std::uint32_t i = 0; i < n; ++i) base[i] = i;
  std::vector<std::uint32_t> p = base;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::vector<rc::TableCandidate> out;
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    rc::TableCandidate t;
    t.n = n;
    for (std::uint32_t a = 0; a < n; ++a) t.table.push_back(perms[choice[a]]);
    if (rc::check_rack_axioms(t).rack()) out.push_back(std::move(t));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++choice[i] < perms.size()) break;
      choice[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

void criterion_extensions() {
  auto point = catalog::table_rack(rc::trivial_table(1));

  // Exhaustive cross-validation over the one-point base: every fiber map
  // family, for fibers of size 2 (16 families) and 3 (19683 families).
  for (std::uint32_t k = 2; k <= 3; ++k) {
    const std::uint64_t total = [&] {
      std::uint64_t t = 1;
      for (std::uint32_t i = 0; i < k * k; ++i) t *= k;
      return t;
    }();
    for (std::uint64_t code = 0; code < total; ++code) {
      auto alpha = ext::CocycleFamily::filled(1, k);
      std::uint64_t rest = code;
      for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) {
          alpha.at(0, 0, i, j) = static_cast<std::uint32_t>(rest % k);
          rest /= k;
        }
      }
      const auto report = ext::validate_cocycle(*point, alpha);
      rc::TableCandidate t;
      t.n = k;
      t.table.assign(k, std::vector<std::uint32_t>(k, 0));
      for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) t.table[i][j] = alpha.at(0, 0, i, j);
      }
      const auto axioms = rc::check_rack_axioms(t);
      require(report.rack_valid == axioms.rack(),
              "validate_cocycle disagrees with the axiom checker (k=" + std::to_string(k) +
                  ", code=" + std::to_string(code) + ")");
      if (report.rack_valid) {
        require(report.quandle_valid == axioms.quandle(),
                "diagonal check disagrees with A3 (k=" + std::to_string(k) +
                    ", code=" + std::to_string(code) + ")");
      }
    }
  }

  // Reconstruction round trips with explicit isomorphisms.
  auto check_roundtrip = [](const std::vector<std::uint32_t>& f, const rc::FiniteRack& X,
                            const rc::FiniteRack& Y, const std::string& label) {
    const auto rec = ext::reconstruct_extension(f, X, Y);
    std::set<std::uint32_t> image(rec.iso.begin(), rec.iso.end());
    require(image.size() == X.size(), label + ": iso is not a bijection");
    require(rc::hom_check(rec.iso, *rec.rebuilt, X), label + ": iso is not a homomorphism");
  };
  auto r3 = catalog::table_rack(rc::dihedral_table(3));
  check_roundtrip({0, 0, 0}, *r3, *point, "R3 over a point");
  auto c4 = catalog::table_rack(rc::cyclic_table(4));
  auto c2 = catalog::table_rack(rc::cyclic_table(2));
  check_roundtrip({0, 1, 0, 1}, *c4, *c2, "C4 over C2");

  // Ten random valid cocycles over R3, produced by relabeling the product.
  Rng rng(1006);
  auto product = catalog::product_ext_r3();
  for (int trial = 0; trial < 10; ++trial) {
    const auto pi = catalog::random_perm(rng, product->size());
    auto copy = catalog::table_rack(catalog::relabeled_table(*product, pi));
    std::vector<std::uint32_t> f(copy->size());
    for (std::uint32_t idx = 0; idx < copy->size(); ++idx) f[pi(idx)] = idx / 2;
    const auto rec = ext::reconstruct_extension(f, *copy, *r3);
    require(ext::validate_cocycle(*r3, rec.alpha).rack_valid,
            "reconstructed cocycle does not validate");
    check_roundtrip(f, *copy, *r3, "relabeled product over R3");
  }

  // Fiber lemma across every surjective homomorphism between small racks.
  std::vector<std::shared_ptr<rc::TableRack>> small;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (const auto& t : all_racks_of_size(n)) {
      small.push_back(std::make_shared<rc::TableRack>(t));
    }
  }
  std::uint64_t homs_checked = 0;
  for (const auto& X : small) {
    for (const auto& Y : small) {
      if (Y->size() > X->size()) continue;
      const std::uint32_t m = X->size();
      const std::uint32_t r = Y->size();
      std::vector<std::uint32_t> f(m, 0);
      while (true) {
        std::vector<bool> hit(r, false);
        for (const auto v : f) hit[v] = true;
        bool surjective = true;
        for (const bool h : hit) surjective = surjective && h;
        bool hom = surjective;
        for (std::uint32_t a = 0; hom && a < m; ++a) {
          for (std::uint32_t b = 0; hom && b < m; ++b) {
            hom = f[X->op_index(a, b)] == Y->op_index(f[a], f[b]);
          }
        }
        if (hom) {
          const auto report = ext::fiber_report(f, *X, *Y);
          require(report.lemma_ok, "fiber lemma failed on an enumerated hom");
          require(report.ok(), "fiber report not ok on an enumerated hom");
          ++homs_checked;
        }
        std::uint32_t i = 0;
        for (; i < m; ++i) {
          if (++f[i] < r) break;
          f[i] = 0;
        }
        if (i == m) break;
      }
    }
  }
  require(homs_checked > 100, "suspiciously few homomorphisms enumerated");
}

// ---------------------------------------------------------------- 7 -----

void criterion_env() {
  const auto free_quandle = present::parse_rack_presentation(
      "< a, b | (a, a) = (1, a), (b*a, a) = (b, a), (a*b^-1, b) = (a, b) >");
  const auto env = present::env_from_presentation(free_quandle);
  require(env.relators.empty(), "free-quandle relations left nontrivial relators");

  for (std::uint32_t n = 1; n <= 5; ++n) {
    auto t = catalog::table_rack(rc::trivial_table(n));
    const auto g = present::env_from_table(*t);
    for (const auto& row : present::exponent_sums(g)) {
      for (const auto v : row) {
        require(v == 0, "trivial quandle relator is not a commutator");
      }
    }
    require(present::abelianization_rank(g) == n,
            "trivial quandle on " + std::to_string(n) + " has wrong abelianization rank");
  }
}

// ---------------------------------------------------------------- 8 -----

void criterion_thompson() {
  using thompson::Element;
  for (std::uint32_t i = 0; i <= 8; ++i) {
    for (std::uint32_t j = i + 1; j <= 8; ++j) {
      const auto w = words::parse_word_default("a" + std::to_string(i) + "*a" +
                                               std::to_string(j + 1) + "*a" + std::to_string(i) +
                                               "^-1");
      const auto expected = words::parse_word_default("a" + std::to_string(j));
      require(Element::from_word(w) == Element::from_word(expected),
              "relation failed at i=" + std::to_string(i) + ", j=" + std::to_string(j));
    }
  }

  Rng rng(1008);
  for (int trial = 0; trial < 1000; ++trial) {
    const words::Word u = catalog::random_word_upto(rng, 5, 12);
    const words::Word v = catalog::random_word_upto(rng, 5, 12);
    require(Element::from_word(u * v) == Element::from_word(u) * Element::from_word(v),
            "normal form is not multiplicative");
  }
}

// ---------------------------------------------------------------- 9 -----

void criterion_protocol() {
  struct Setup {
    std::string name;
    kex::PublicParams params;
  };
  std::vector<Setup> setups;
  setups.push_back(
      {"R7", kex::make_params(descriptors::table_descriptor(rc::dihedral_table(7)), {"0", "1"})});
  setups.push_back({"S4 transposition quandle",
                    kex::make_params(descriptors::conj_perm_descriptor(
                                         4, {"(0 1)", "(1 2)", "(2 3)"}),
                                     {"(0 1)", "(1 2)"})});
  {
    auto ext_rack = catalog::r6_over_r3_ext();
    const auto base_desc = descriptors::table_descriptor(rc::dihedral_table(3));
    const auto desc = descriptors::extension_descriptor(base_desc, ext_rack->alpha());
    setups.push_back(
        {"R6-over-R3 extension", kex::make_params(desc, {"(0, 0)", "(1, 1)"})});
  }
  setups.push_back({"Thompson", kex::make_params(descriptors::thompson_descriptor(8, 8),
                                                 {"a0", "a1", "a2"})});

  Bytes ttp_seed(crypto::kSeedSize, std::uint8_t{42});
  const auto ttp = crypto::signing_key_from_seed(ttp_seed);

  for (const auto& setup : setups) {
    Rng rng(2000);
    kex::KeyPair kp = kex::keygen(setup.params, rng);
    kex::Certificate cert = kex::issue_cert(ttp, "alice", setup.params, kp.images);
    const bool conj = setup.params.rack->conjugation_model() != nullptr;
    for (int session = 0; session < 1000; ++session) {
      if (session % 100 == 99) {
        kp = kex::keygen(setup.params, rng);
        cert = kex::issue_cert(ttp, "alice", setup.params, kp.images);
      }
      const auto st = kex::initiate(setup.params, kp.sk, rng);
      const kex::RackWord b = conj && rng.coin()
                                  ? kex::random_group_word(setup.params.t(), 8, rng)
                                  : kex::random_slp(setup.params.t(), 3, rng);
      const auto rr = kex::respond(setup.params, cert, b, st.msg1);
      const auto secret_a = kex::finalize(st, setup.params, rr.msg2);
      require(secret_a == rr.secret, setup.name + ": shared secret identity failed");
      const auto th = kex::transcript_hash(st.msg1, rr.msg2);
      const auto key_a = kex::kdf(secret_a, setup.params.params_hash, th);
      const auto key_b = kex::kdf(rr.secret, setup.params.params_hash, th);
      require(key_a == key_b, setup.name + ": session keys differ");
    }

    // Loopback TCP handshakes on the same parameters.
    netcli::ResponderConfig config;
    config.params = setup.params;
    config.ttp_public = ttp.public_key;
    config.seed = 31337;
    netcli::Server server(std::move(config), "127.0.0.1", 0);
    server.start();
    for (int session = 0; session < 3; ++session) {
      const auto outcome = netcli::run_initiator("127.0.0.1", server.port(), setup.params, kp.sk,
                                                 cert, 500 + session, nullptr);
      require(outcome.session_key.size() == crypto::kHashSize,
              setup.name + ": TCP handshake produced no key");
    }
    server.stop();
  }
}

// --------------------------------------------------------------- 10 -----

void criterion_attack() {
  Bytes ttp_seed(crypto::kSeedSize, std::uint8_t{42});

  struct Setup {
    std::string name;
    kex::PublicParams params;
  };
  const Setup setups[] = {
      {"R7", kex::make_params(descriptors::table_descriptor(rc::dihedral_table(7)), {"0", "1"})},
      {"S4 transpositions",
       kex::make_params(descriptors::conj_perm_descriptor(4, {"(0 1)", "(1 2)", "(2 3)"}),
                        {"(0 1)", "(1 2)"})},
      {"trivial quandle",
       kex::make_params(descriptors::table_descriptor(rc::trivial_table(4)), {"0", "1"})},
  };
  Rng rng(3000);
  for (const auto& setup : setups) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto kp = kex::keygen(setup.params, rng);
      const auto consistent = kex::brute_force_secret(setup.params, kp.images);
      bool found = false;
      for (const auto& cand : consistent) found = found || cand == kp.sk.a;
      require(found, setup.name + ": true secret missing from the consistency set");
    }
  }

  // S3 transposition example with both generators published: unique recovery.
  const auto s3t = kex::make_params(descriptors::conj_perm_descriptor(3, {"(0 1)", "(1 2)"}),
                                    {"(0 1)", "(1 2)"});
  auto finite = std::dynamic_pointer_cast<const rc::FiniteRack>(s3t.rack);
  for (std::uint32_t i = 0; i < finite->size(); ++i) {
    const auto a = finite->element(i);
    const auto consistent = kex::brute_force_secret(s3t, kex::images_of(s3t, a));
    require(consistent.size() == 1, "S3 transposition consistency set is not a singleton");
    require(consistent[0] == a, "S3 transposition recovery found the wrong element");
  }

  // The degenerate-parameter warning fires on a trivial quandle.
  const auto trivial =
      kex::make_params(descriptors::table_descriptor(rc::trivial_table(4)), {"0", "1"});
  Rng wrng(3001);
  const auto warning = kex::check_params(trivial, wrng);
  require(warning.has_value(), "degenerate warning did not fire");
  require(warning->find("degenerate") != std::string::npos, "warning text changed");
}

// -------------------------------------------------------------------------

struct Criterion {
  int number;
  std::string label;
  std::function<void()> run;
  double limit_seconds;  // 0 = no limit
};

}  // namespace

int main() {
  crypto::init();
  const std::vector<Criterion> criteria = {
      {1, "axiom suite", criterion_axioms, 5.0},
      {2, "free structures", criterion_free_structures, 5.0},
      {3, "positivity trichotomy", criterion_positivity, 0.0},
      {4, "inner automorphisms and the center kernel", criterion_inn, 10.0},
      {5, "operator group relators", criterion_operator_group, 0.0},
      {6, "extension suite", criterion_extensions, 30.0},
      {7, "enveloping group emitters", criterion_env, 0.0},
      {8, "thompson normal form", criterion_thompson, 10.0},
      {9, "protocol correctness", criterion_protocol, 60.0},
      {10, "attack oracle", criterion_attack, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      c.run();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.detail;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (verdict == "PASS" && c.limit_seconds > 0 && elapsed > c.limit_seconds) {
      verdict = "FAIL";
      detail = "runtime " + std::to_string(elapsed) + "s exceeds " +
               std::to_string(c.limit_seconds) + "s";
    }
    std::ostringstream line;
    line << "criterion " << c.number << " (" << c.label << "): " << verdict;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", elapsed);
    line << "  [" << buf << "s]";
    if (!detail.empty()) line << "  -- " << detail;
    std::cout << line.str() << "\n";
    if (verdict == "FAIL") ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
