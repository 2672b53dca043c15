#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rackkex/bytes.hpp"
#include "rackkex/words.hpp"

namespace rackkex::freerack {

/// Element (u, a) of the free rack F(A) × A. The same type carries free
/// quandle representatives once fq_canonical has stripped the trailing
/// letters that the quandle relation identifies.
struct FRElement {
  words::Word u;
  std::uint32_t a = 0;

  friend bool operator==(const FRElement&, const FRElement&) = default;
  friend bool operator<(const FRElement& x, const FRElement& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.u < y.u;
  }
};

/// (u,a) ▷ (v,b) = (u a u⁻¹ v, b)
FRElement fr_op(const FRElement& x, const FRElement& y);

/// The unique y with fr_op(x, y) = z: for x = (u,a), z = (w,b) this is
/// (u a⁻¹ u⁻¹ w, b).
FRElement fr_ldiv(const FRElement& x, const FRElement& z);

/// Canonical free-quandle representative: strip trailing a^{±1} letters,
/// collapsing the orbit of (w,a) = (wa,a).
FRElement fq_canonical(const FRElement& x);

bool fq_is_canonical(const FRElement& x);

/// (w,a) ↦ w a w⁻¹, the embedding of the free quandle into the conjugation
/// rack of the free group. Requires a canonical representative.
words::Word fq_embed(const FRElement& x);

/// Conjugation action for words over an alphabet of positive words: expands
/// every letter of U through `letters`, then returns eval(U)·p·eval(U)⁻¹.
/// Both p and every named letter word must be positive.
words::Word fplus_eval(const words::Word& U, const std::vector<words::Word>& letters,
                       const words::Word& p);

/// word encoding ‖ 4-byte symbol index
Bytes canonical_bytes(const FRElement& x);
FRElement from_bytes(const Bytes& bytes);

/// `(b*a^-1, a)`
std::string text(const FRElement& x, const words::Alphabet& alphabet = {});
FRElement parse(std::string_view s, words::Alphabet& alphabet, bool auto_add = true);
FRElement parse(std::string_view s);

}  // namespace rackkex::freerack
