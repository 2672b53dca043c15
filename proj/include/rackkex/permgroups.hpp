#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rackkex/bytes.hpp"

namespace rackkex::permgroups {

/// Permutation of {0, ..., n-1} as an explicit image array.
class Perm {
 public:
  explicit Perm(std::vector<std::uint32_t> images);
  static Perm identity(std::uint32_t degree);
  /// Build from disjoint-cycle data, e.g. {{0,1},{2,3}}.
  static Perm from_cycles(std::uint32_t degree,
                          const std::vector<std::vector<std::uint32_t>>& cycles);

  std::uint32_t degree() const { return static_cast<std::uint32_t>(images_.size()); }
  std::uint32_t operator()(std::uint32_t i) const { return images_.at(i); }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Perm inverse() const;
  bool is_identity() const;

  friend bool operator==(const Perm&, const Perm&) = default;
  bool operator<(const Perm& rhs) const { return images_ < rhs.images_; }

 private:
  std::vector<std::uint32_t> images_;
};

/// (g h)(i) = g(h(i)); h acts first.
Perm compose(const Perm& g, const Perm& h);
/// g h g^-1
Perm conj(const Perm& g, const Perm& h);

inline constexpr std::size_t kDefaultClosureCap = 1'000'000;

/// Breadth-first closure of the generated group, starting from the identity.
/// Throws once the element count would exceed cap; never returns a
/// truncated set. The set iterates in canonical image-array order.
std::set<Perm> closure(const std::vector<Perm>& generators,
                       std::size_t cap = kDefaultClosureCap);

struct PermGroup {
  std::uint32_t degree = 0;
  std::vector<Perm> generators;
  std::vector<Perm> elements;  // sorted by image arrays when materialized

  std::size_t order() const { return elements.size(); }
  bool contains(const Perm& p) const;
};

PermGroup generate(const std::vector<Perm>& generators,
                   std::size_t cap = kDefaultClosureCap);

/// All z with zg = gz for every group element g; requires materialized elements.
std::vector<Perm> center(const PermGroup& group);

/// Smallest generator-stable point set containing the given point.
std::set<std::uint32_t> orbit(const std::vector<Perm>& generators, std::uint32_t point);

/// Cycle notation, fixed points omitted; the identity prints as "()".
std::string cycle_text(const Perm& p);
Perm parse_cycles(std::string_view text, std::uint32_t degree);

/// degree then each image, all 4-byte big-endian.
Bytes canonical_bytes(const Perm& p);
Perm perm_from_reader(ByteReader& r);

}  // namespace rackkex::permgroups
