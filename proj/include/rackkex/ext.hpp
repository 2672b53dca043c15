#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rackkex/rackcore.hpp"

namespace rackkex::ext {

/// Family of fiber maps α_{y1 y2}: F × F → F indexed by base pairs, stored
/// densely as alpha[y1][y2][i][j].
struct CocycleFamily {
  std::uint32_t m = 0;  // base size
  std::uint32_t k = 0;  // fiber size
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> alpha;

  static CocycleFamily filled(std::uint32_t m, std::uint32_t k, std::uint32_t value = 0);
  /// α(i,j) = j for every base pair; always a valid cocycle.
  static CocycleFamily constant(std::uint32_t m, std::uint32_t k);

  std::uint32_t at(std::uint32_t y1, std::uint32_t y2, std::uint32_t i, std::uint32_t j) const {
    return alpha[y1][y2][i][j];
  }
  std::uint32_t& at(std::uint32_t y1, std::uint32_t y2, std::uint32_t i, std::uint32_t j) {
    return alpha[y1][y2][i][j];
  }
};

struct CocycleWitness {
  // Meaning depends on the failed condition: the bijection condition uses
  // (y1, y2, i, j, l) as the colliding pair α(i,j) = α(i,l); the cocycle
  // equation uses the full sextuple.
  std::uint32_t y1 = 0, y2 = 0, y3 = 0, i = 0, j = 0, l = 0;
  std::string condition;  // "bijection", "cocycle", "diagonal"

  std::string describe() const;
};

struct CocycleReport {
  bool rack_valid = false;
  bool quandle_valid = false;  // diagonal condition; meaningful over a quandle base
  bool base_is_quandle = false;
  std::optional<CocycleWitness> witness;
};

/// Exhaustively checks the second-slot bijection condition, the cocycle
/// equation, and (over a quandle base) the diagonal condition; reports the
/// first failing witness. Throws on shape mismatch with Y or k.
CocycleReport validate_cocycle(const rackcore::FiniteRack& Y, const CocycleFamily& alpha);

/// Rack on pairs (y, i) with (y1,i) ▷ (y2,j) = (y1▷y2, α_{y1 y2}(i,j)).
/// Element order is base-major: index(y, i) = y·k + i.
class ExtensionRack : public rackcore::FiniteRack {
 public:
  ExtensionRack(std::shared_ptr<const rackcore::FiniteRack> base, CocycleFamily alpha);

  const rackcore::FiniteRack& base() const { return *base_; }
  std::shared_ptr<const rackcore::FiniteRack> base_ptr() const { return base_; }
  std::uint32_t fiber_size() const { return alpha_.k; }
  const CocycleFamily& alpha() const { return alpha_; }

  std::string element_text(const rackcore::RackElement& e) const override;
  rackcore::RackElement parse_element(std::string_view text) const override;

 private:
  std::shared_ptr<const rackcore::FiniteRack> base_;
  CocycleFamily alpha_;
};

/// Validates the cocycle and constructs the extension; refuses invalid
/// families with the witness in the error message.
std::shared_ptr<ExtensionRack> build_extension(std::shared_ptr<const rackcore::FiniteRack> base,
                                               CocycleFamily alpha);

struct FiberReport {
  std::vector<std::uint32_t> fiber_sizes;  // indexed by Y
  bool lemma_ok = false;      // |f⁻¹(y2)| = |f⁻¹(y1▷y2)| for all pairs
  bool connected = false;     // Y connected
  bool equal_fibers = false;  // all fibers share one cardinality
  std::optional<std::array<std::uint32_t, 2>> witness;  // (y1, y2) violating the lemma

  bool ok() const { return lemma_ok && (!connected || equal_fibers); }
};

/// f maps X indices onto Y indices and must be a surjective homomorphism
/// (throws otherwise). Verifies the fiber-cardinality equalities.
FiberReport fiber_report(const std::vector<std::uint32_t>& f, const rackcore::FiniteRack& X,
                         const rackcore::FiniteRack& Y);

struct Reconstruction {
  CocycleFamily alpha;
  /// Extension index y·k + i ↦ X index; a rack isomorphism onto X.
  std::vector<std::uint32_t> iso;
  std::shared_ptr<ExtensionRack> rebuilt;
};

/// Inverts the extension construction: picks per-fiber bijections g_y
/// (fiber elements in canonical byte order), reads off the cocycle
/// α_{y1 y2}(i,j) = g⁻¹_{y1▷y2}(g_{y1}(i) ▷ g_{y2}(j)), and verifies that
/// the rebuilt extension is isomorphic to X via (y,i) ↦ g_y(i).
/// Refuses maps with unequal fiber sizes, naming the offending fibers.
Reconstruction reconstruct_extension(const std::vector<std::uint32_t>& f,
                                     const rackcore::FiniteRack& X,
                                     const rackcore::FiniteRack& Y);

}  // namespace rackkex::ext
