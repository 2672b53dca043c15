#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rackkex/bytes.hpp"

namespace rackkex::words {

/// One occurrence of a generator or its formal inverse.
struct Letter {
  std::uint32_t index = 0;
  std::int8_t sign = +1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
};

inline Letter inverse(Letter l) { return {l.index, static_cast<std::int8_t>(-l.sign)}; }

/// Rank of a letter in the fixed total order a0 < a0^-1 < a1 < a1^-1 < ...
inline std::uint64_t letter_rank(Letter l) {
  return 2ull * l.index + (l.sign < 0 ? 1u : 0u);
}

/// Freely reduced word over an indexed alphabet; the empty word is the
/// group identity. Instances are immutable values.
class Word {
 public:
  Word() = default;

  /// Free reduction of an arbitrary letter sequence (cancel a a^-1 pairs
  /// until fixpoint; the result does not depend on cancellation order).
  static Word reduced(const std::vector<Letter>& letters);

  static Word generator(std::uint32_t index, int sign = +1);

  const std::vector<Letter>& letters() const { return letters_; }
  bool identity() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word operator*(const Word& rhs) const;
  Word inverse() const;

  friend bool operator==(const Word&, const Word&) = default;
  bool operator<(const Word& rhs) const;  // canonical byte order

 private:
  explicit Word(std::vector<Letter> reduced_letters) : letters_(std::move(reduced_letters)) {}
  std::vector<Letter> letters_;
};

inline Word mul(const Word& u, const Word& v) { return u * v; }
inline Word inv(const Word& w) { return w.inverse(); }

/// Positivity predicate defining F(A)+: a non-empty reduced word is positive
/// iff it precedes its inverse letter-wise under the fixed total order.
/// Exactly one of {w, w^-1} is positive. Throws on the empty word.
bool is_positive(const Word& w);

/// 4-byte big-endian letter count, then per letter the signed value
/// sign * (index + 1) as 4 bytes big-endian. Injective on reduced words.
Bytes canonical_bytes(const Word& w);
void append_canonical(Bytes& out, const Word& w);

/// Inverse of canonical_bytes; validates free reduction.
Word word_from_reader(ByteReader& r);
Word word_from_bytes(const Bytes& b);

/// Display names for symbol indices. The default name of index i is "a<i>".
/// Names only affect text I/O, never the algebra.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::uint32_t add(const std::string& name);
  /// Index of a declared name; if auto_add, unknown names are appended.
  std::uint32_t index_of(const std::string& name, bool auto_add = false);
  bool has(const std::string& name) const;
  std::string name(std::uint32_t index) const;
  std::size_t declared() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> by_name_;
};

/// Text form: letters separated by '*', inverse suffix "^-1"; the empty
/// word prints as "1". Example: a0*b0^-1
std::string text(const Word& w, const Alphabet& alphabet = Alphabet());
Word parse_word(std::string_view s, Alphabet& alphabet, bool auto_add = false);

/// Strict variant for the default alphabet a0, a1, ...: names must be a<i>.
Word parse_word_default(std::string_view s);

}  // namespace rackkex::words
