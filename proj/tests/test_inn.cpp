#include <doctest.h>

#include "catalog.hpp"
#include "rackkex/inn.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/words.hpp"

using namespace rackkex;
using namespace rackkex::rackcore;
using namespace rackkex::inn;

TEST_CASE("left multiplications of the three-element dihedral quandle") {
  auto r3 = catalog::table_rack(dihedral_table(3));
  CHECK(permgroups::cycle_text(phi(*r3, 0)) == "(1 2)");
  CHECK(permgroups::cycle_text(phi(*r3, 1)) == "(0 2)");
  CHECK(permgroups::cycle_text(phi(*r3, 2)) == "(0 1)");
  CHECK(inn_group(*r3).order() == 6);
  CHECK(is_connected(*r3));
}

TEST_CASE("trivial quandles have trivial inner automorphisms") {
  auto t3 = catalog::table_rack(trivial_table(3));
  CHECK(inn_group(*t3).order() == 1);
  CHECK_FALSE(is_connected(*t3));
}

TEST_CASE("cyclic racks rotate transitively") {
  auto c4 = catalog::table_rack(cyclic_table(4));
  CHECK(inn_group(*c4).order() == 4);
  CHECK(is_connected(*c4));
}

TEST_CASE("phi is a rack homomorphism on the whole catalog") {
  for (const auto& entry : catalog::finite_catalog()) {
    CAPTURE(entry.name);
    CHECK(phi_is_rack_hom(*entry.rack));
  }
}

TEST_CASE("phi_word composes left to right") {
  auto r3 = catalog::table_rack(dihedral_table(3));
  words::Alphabet alphabet({"x0", "x1", "x2"});
  const auto w = words::parse_word("x0*x1^-1", alphabet);
  const auto expected =
      permgroups::compose(phi(*r3, 0), phi(*r3, 1).inverse());
  CHECK(phi_word(*r3, w) == expected);
  CHECK(phi_word(*r3, words::Word()).is_identity());

  words::Alphabet wide({"x0", "x1", "x2", "x3"});
  CHECK_THROWS(phi_word(*r3, words::parse_word("x3", wide)));
}

TEST_CASE("conjugation action has kernel exactly the center") {
  struct Case {
    const char* name;
    permgroups::PermGroup group;
  };
  const Case cases[] = {
      {"S3", catalog::sym(3)},     {"S4", catalog::sym(4)}, {"A4", catalog::alt4()},
      {"D4", catalog::dih4()},     {"Z4", catalog::cyc4()}, {"Z2xZ2", catalog::klein4()},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    auto rack = group_rack(c.group);
    const auto report = check_center_kernel(*rack);
    CHECK(report.ok());
    CHECK(report.image_order == report.inn_order);
    CHECK(report.inn_order * report.center_size == report.group_order);
    CHECK(report.kernel_size == report.center_size);
    CHECK(report.witness.empty());
  }
}

TEST_CASE("harvested relators act trivially and the walk reaches all of Inn") {
  for (const auto& entry : catalog::finite_catalog()) {
    CAPTURE(entry.name);
    const auto harvest = harvest_relations(*entry.rack, 16);
    CHECK(harvest.complete);
    CHECK(harvest.reached == inn_group(*entry.rack).order());
    for (const auto& relator : harvest.relators) {
      CHECK(phi_word(*entry.rack, relator).is_identity());
    }
  }
}

TEST_CASE("harvest finds the square relator of the two-element cyclic rack") {
  auto c2 = catalog::table_rack(cyclic_table(2));
  const auto harvest = harvest_relations(*c2, 4);
  CHECK(harvest.reached == 2);
  words::Alphabet alphabet({"x0", "x1"});
  bool found_square = false;
  for (const auto& relator : harvest.relators) {
    if (relator == words::parse_word("x0*x0", alphabet)) found_square = true;
    CHECK_FALSE(relator.identity());
  }
  CHECK(found_square);
}

TEST_CASE("a severe length bound leaves the walk incomplete") {
  auto r9 = catalog::table_rack(dihedral_table(9));
  const auto harvest = harvest_relations(*r9, 1);
  CHECK_FALSE(harvest.complete);
  CHECK(harvest.reached < inn_group(*r9).order());
}
