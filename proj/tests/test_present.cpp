#include <doctest.h>

#include <string>

#include "catalog.hpp"
#include "rackkex/inn.hpp"
#include "rackkex/present.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/words.hpp"

using namespace rackkex;
using namespace rackkex::present;
using namespace rackkex::rackcore;

TEST_CASE("rack presentations parse and round trip through emit") {
  const char* sources[] = {
      "< a | >",
      "< a, b | (a, b) = (1, b) >",
      "< a, b, c | (a*b^-1, c) = (1, c), (b, a) = (c*c, a) >",
  };
  for (const char* s : sources) {
    const RackPresentation p = parse_rack_presentation(s);
    CHECK(emit_text(p) == s);
    CHECK(parse_rack_presentation(emit_text(p)) == p);
  }
}

TEST_CASE("parser reports locations for syntax errors") {
  try {
    parse_rack_presentation("< a |\n(a, b) = (1, a) >");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("undeclared") != std::string::npos);
  }
  CHECK_THROWS(parse_rack_presentation("< a, a | >"));
  CHECK_THROWS(parse_rack_presentation("< a | (a, a) = (1, a) > leftover"));
  CHECK_THROWS(parse_rack_presentation("< a | (a a) = (1, a) >"));
  CHECK_THROWS(parse_rack_presentation("a | >"));
}

TEST_CASE("enveloping groups from presentations conjugate the relation sides") {
  const auto p = parse_rack_presentation("< a, b, c | (a, b) = (1, c) >");
  const auto g = env_from_presentation(p);
  CHECK(g.generators.names() == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(g.relators.size() == 1);
  words::Alphabet alphabet({"a", "b", "c"});
  CHECK(g.relators[0] == words::parse_word("a*b*a^-1*c^-1", alphabet));
}

TEST_CASE("free-quandle style relations melt away") {
  const auto p = parse_rack_presentation(
      "< a, b | (a, a) = (1, a), (b*a, a) = (b, a), (a*b^-1, b) = (a, b) >");
  const auto g = env_from_presentation(p);
  CHECK(g.relators.empty());
  CHECK(emit_text(g) == "< a, b | >");
}

TEST_CASE("enveloping groups from tables") {
  auto r3 = catalog::table_rack(dihedral_table(3));
  const auto g = env_from_table(*r3);
  CHECK(g.generators.declared() == 3);
  // Nine ordered pairs, three diagonal relators dropped by idempotence.
  CHECK(g.relators.size() == 6);
  for (const auto& relator : g.relators) {
    CHECK_FALSE(relator.identity());
  }

  auto t2 = catalog::table_rack(trivial_table(2));
  const auto h = env_from_table(*t2);
  // Off-diagonal pairs give commutators.
  CHECK(h.relators.size() == 2);
  words::Alphabet alphabet({"x0", "x1"});
  CHECK(h.relators[0] == words::parse_word("x0*x1*x0^-1*x1^-1", alphabet));

  auto point = catalog::table_rack(trivial_table(1));
  CHECK(env_from_table(*point).relators.empty());
}

TEST_CASE("operator group presentations are sound and complete for the walk") {
  auto t2 = catalog::table_rack(trivial_table(2));
  const auto g = present_operator_group(*t2, 8);
  // Inn is trivial, so every generator dies.
  words::Alphabet alphabet({"x0", "x1"});
  bool saw_x0 = false, saw_x1 = false;
  for (const auto& relator : g.relators) {
    if (relator == words::parse_word("x0", alphabet)) saw_x0 = true;
    if (relator == words::parse_word("x1", alphabet)) saw_x1 = true;
  }
  CHECK(saw_x0);
  CHECK(saw_x1);

  auto r3 = catalog::table_rack(dihedral_table(3));
  const auto pr3 = present_operator_group(*r3, 12);
  for (const auto& relator : pr3.relators) {
    CHECK(inn::phi_word(*r3, relator).is_identity());
  }
}

TEST_CASE("exponent sums and integer rank") {
  words::Alphabet alphabet({"a", "b"});
  GroupPresentation g;
  g.generators = alphabet;
  g.relators = {words::parse_word("a*b*a^-1*b^-1", alphabet)};
  const auto sums = exponent_sums(g);
  CHECK(sums == std::vector<std::vector<std::int64_t>>{{0, 0}});
  CHECK(integer_rank(sums) == 0);
  CHECK(abelianization_rank(g) == 2);

  GroupPresentation h;
  h.generators = alphabet;
  h.relators = {words::parse_word("a*a", alphabet), words::parse_word("a*b", alphabet)};
  CHECK(integer_rank(exponent_sums(h)) == 2);
  CHECK(abelianization_rank(h) == 0);

  CHECK(integer_rank({{2, 4}, {1, 2}}) == 1);
  CHECK(integer_rank({{0}}) == 0);
  CHECK(integer_rank({}) == 0);
}

TEST_CASE("trivial quandles abelianize freely") {
  for (std::uint32_t n = 1; n <= 5; ++n) {
    auto t = catalog::table_rack(trivial_table(n));
    const auto g = env_from_table(*t);
    for (const auto& row : exponent_sums(g)) {
      for (const auto v : row) CHECK(v == 0);
    }
    CHECK(abelianization_rank(g) == n);
  }
}

TEST_CASE("group presentation emit format") {
  words::Alphabet alphabet({"a", "b"});
  GroupPresentation g;
  g.generators = alphabet;
  CHECK(emit_text(g) == "< a, b | >");
  g.relators = {words::parse_word("a*b*a^-1*b^-1", alphabet)};
  CHECK(emit_text(g) == "< a, b | a*b*a^-1*b^-1 >");
}
