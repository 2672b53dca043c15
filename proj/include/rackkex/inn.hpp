#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rackkex/permgroups.hpp"
#include "rackkex/rackcore.hpp"
#include "rackkex/words.hpp"

namespace rackkex::inn {

/// Left multiplication b ↦ a▷b as a permutation of the element indices.
permgroups::Perm phi(const rackcore::FiniteRack& X, std::uint32_t a);
permgroups::Perm phi(const rackcore::FiniteRack& X, const rackcore::RackElement& a);

/// Inn(X) = ⟨φ_a : a ∈ X⟩, materialized.
permgroups::PermGroup inn_group(const rackcore::FiniteRack& X,
                                std::size_t cap = permgroups::kDefaultClosureCap);

/// True iff the φ generators act with a single orbit.
bool is_connected(const rackcore::FiniteRack& X);

/// True iff φ(a▷b) = φ(a) φ(b) φ(a)⁻¹ for all pairs, i.e. Φ is itself a
/// rack homomorphism into the conjugation rack of Sym(X).
bool phi_is_rack_hom(const rackcore::FiniteRack& X);

/// φ_w for a word over element symbols: letters compose left to right, so
/// w = a1*a2^-1 yields φ_{a1}·φ_{a2}⁻¹. Symbol indices must name elements.
permgroups::Perm phi_word(const rackcore::FiniteRack& X, const words::Word& w);

struct CenterKernelReport {
  std::size_t group_order = 0;
  std::size_t image_order = 0;
  std::size_t inn_order = 0;
  std::size_t kernel_size = 0;
  std::size_t center_size = 0;
  bool image_matches = false;    // Φ(G) = Inn(X) as permutation sets
  bool kernel_is_center = false; // ker Φ = Z(G)
  std::string witness;           // first offending group element, cycle text

  bool ok() const { return image_matches && kernel_is_center; }
};

/// Extends Φ to the group G generated by the elements of X (g acts by
/// conjugation on X) and checks image and kernel against Inn(X) and Z(G).
CenterKernelReport check_center_kernel(const rackcore::FiniteConjRack& X,
                                       std::size_t cap = permgroups::kDefaultClosureCap);

struct Harvest {
  /// Words over element symbols, each with φ_w = id.
  std::vector<words::Word> relators;
  /// Distinct permutations visited by the walk.
  std::size_t reached = 0;
  /// True when the walk explored every edge, i.e. reached all of Inn(X)
  /// within the length bound.
  bool complete = false;
};

/// Breadth-first walk over Inn(X) along the positive φ generators; every
/// edge that closes a cycle against the spanning tree emits the relator
/// tree_word(p)·a·tree_word(q)⁻¹. Nodes deeper than max_len are not
/// expanded.
Harvest harvest_relations(const rackcore::FiniteRack& X, std::size_t max_len,
                          std::size_t cap = permgroups::kDefaultClosureCap);

}  // namespace rackkex::inn
