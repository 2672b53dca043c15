#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rackkex/freerack.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/words.hpp"

namespace rackkex::present {

struct RackRelation {
  freerack::FRElement lhs;
  freerack::FRElement rhs;

  friend bool operator==(const RackRelation&, const RackRelation&) = default;
};

/// ⟨A | R⟩ as a rack: generators plus relations between free-rack elements.
struct RackPresentation {
  words::Alphabet generators;
  std::vector<RackRelation> relations;

  friend bool operator==(const RackPresentation& a, const RackPresentation& b) {
    return a.generators.names() == b.generators.names() && a.relations == b.relations;
  }
};

/// ⟨A | R⟩ as a group: every relator is read as relator = 1.
struct GroupPresentation {
  words::Alphabet generators;
  std::vector<words::Word> relators;

  friend bool operator==(const GroupPresentation& a, const GroupPresentation& b) {
    return a.generators.names() == b.generators.names() && a.relators == b.relators;
  }
};

/// Grammar: `< gens | rels >` with gens `a, b, ...` and rels
/// `(word, name) = (word, name), ...`; words are `1` or `*`-joined letters
/// with optional `^-1`. Errors carry line and column.
RackPresentation parse_rack_presentation(std::string_view text);

/// The enveloping group: same generators, one relator u a u⁻¹ (v b v⁻¹)⁻¹
/// per relation (u,a) = (v,b); relators that reduce to 1 are dropped.
GroupPresentation env_from_presentation(const RackPresentation& P);

/// Env(X) for a finite rack: one generator per element, one relator
/// x_a x_b x_a⁻¹ x_{a▷b}⁻¹ per ordered pair, trivially-reducing ones dropped.
GroupPresentation env_from_table(const rackcore::FiniteRack& X);

/// Operator-group presentation ⟨X | w = 1 whenever φ_w = id⟩ with the
/// relator set harvested from the Inn(X) walk.
GroupPresentation present_operator_group(const rackcore::FiniteRack& X, std::size_t max_len);

std::string emit_text(const GroupPresentation& P);
std::string emit_text(const RackPresentation& P);

/// Exponent-sum vector of each relator over the generators (abelianization
/// matrix rows).
std::vector<std::vector<std::int64_t>> exponent_sums(const GroupPresentation& P);

/// Rank of an integer matrix by exact Euclidean column elimination.
std::uint32_t integer_rank(std::vector<std::vector<std::int64_t>> m);

/// Rank of the abelianized group: #generators − rank of the exponent matrix.
std::uint32_t abelianization_rank(const GroupPresentation& P);

}  // namespace rackkex::present
