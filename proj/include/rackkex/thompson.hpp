#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rackkex/bytes.hpp"
#include "rackkex/words.hpp"

namespace rackkex::thompson {

/// Run of a single generator: index^exponent with exponent >= 1.
struct Block {
  std::uint32_t index = 0;
  std::uint32_t exponent = 1;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Element of Thompson's group F in normal form
///   a_{i1}^{r1} ... a_{im}^{rm} a_{jn}^{-sn} ... a_{j1}^{-s1}
/// with i1 < ... < im and j1 < ... < jn, and the cancellation condition:
/// whenever some index occurs in both parts, the next index occurs in at
/// least one part. The identity has both parts empty.
class Element {
 public:
  Element() = default;

  /// Normal form of a freely reduced word in the generators a_index.
  static Element from_word(const words::Word& w);

  const std::vector<Block>& positive_part() const { return pos_; }
  const std::vector<Block>& negative_part() const { return neg_; }
  bool identity() const { return pos_.empty() && neg_.empty(); }

  Element operator*(const Element& rhs) const;
  Element inverse() const;

  friend bool operator==(const Element&, const Element&) = default;

  /// The normal form read back as a freely reduced word.
  words::Word to_word() const;

 private:
  void push_letter(std::uint32_t index, int sign);
  void normalize();
  void check_block_invariants() const;

  friend Element element_from_reader(ByteReader& r);

  std::vector<Block> pos_;
  std::vector<Block> neg_;
};

inline Element mul(const Element& g, const Element& h) { return g * h; }
/// g h g^-1
Element conjugate(const Element& g, const Element& h);

/// Positive-part pair list then negative-part pair list; each part opens
/// with a 4-byte big-endian pair count, each pair is two 4-byte big-endian
/// integers (index, exponent).
Bytes canonical_bytes(const Element& e);
void append_canonical(Bytes& out, const Element& e);
Element element_from_reader(ByteReader& r);
Element element_from_bytes(const Bytes& b);

std::string text(const Element& e);
Element parse(std::string_view s);  // words over the default alphabet a0, a1, ...

}  // namespace rackkex::thompson
