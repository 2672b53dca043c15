#include "rackkex/freerack.hpp"

#include <cctype>

namespace rackkex::freerack {

FRElement fr_op(const FRElement& x, const FRElement& y) {
  const auto a = words::Word::generator(x.a);
  return {x.u * a * x.u.inverse() * y.u, y.a};
}

FRElement fr_ldiv(const FRElement& x, const FRElement& z) {
  const auto a_inv = words::Word::generator(x.a, -1);
  return {x.u * a_inv * x.u.inverse() * z.u, z.a};
}

FRElement fq_canonical(const FRElement& x) {
  auto letters = x.u.letters();
  while (!letters.empty() && letters.back().index == x.a) letters.pop_back();
  // The tail of a reduced word is reduced, so this rebuild never cancels.
  return {words::Word::reduced(letters), x.a};
}

bool fq_is_canonical(const FRElement& x) {
  const auto& letters = x.u.letters();
  return letters.empty() || letters.back().index != x.a;
}

words::Word fq_embed(const FRElement& x) {
  if (!fq_is_canonical(x)) {
    throw Error("fq_embed expects a canonical representative");
  }
  return x.u * words::Word::generator(x.a) * x.u.inverse();
}

words::Word fplus_eval(const words::Word& U, const std::vector<words::Word>& letters,
                       const words::Word& p) {
  if (!words::is_positive(p)) throw Error("word is not positive");
  for (const auto& w : letters) {
    if (!words::is_positive(w)) throw Error("alphabet letter is not a positive word");
  }
  words::Word expanded;
  for (const auto& l : U.letters()) {
    if (l.index >= letters.size()) throw Error("letter names no alphabet word");
    expanded = expanded * (l.sign > 0 ? letters[l.index] : letters[l.index].inverse());
  }
  return expanded * p * expanded.inverse();
}

Bytes canonical_bytes(const FRElement& x) {
  Bytes out = words::canonical_bytes(x.u);
  put_u32be(out, x.a);
  return out;
}

FRElement from_bytes(const Bytes& bytes) {
  ByteReader r(bytes);
  FRElement x;
  x.u = words::word_from_reader(r);
  x.a = r.u32be();
  r.done();
  return x;
}

std::string text(const FRElement& x, const words::Alphabet& alphabet) {
  return "(" + words::text(x.u, alphabet) + ", " + alphabet.name(x.a) + ")";
}

FRElement parse(std::string_view s, words::Alphabet& alphabet, bool auto_add) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  if (end - begin < 2 || s[begin] != '(' || s[end - 1] != ')') {
    throw Error("expected element of the form (word, symbol)");
  }
  const auto inner = s.substr(begin + 1, end - begin - 2);
  const auto comma = inner.rfind(',');
  if (comma == std::string_view::npos) {
    throw Error("expected element of the form (word, symbol)");
  }
  auto symbol = inner.substr(comma + 1);
  while (!symbol.empty() && std::isspace(static_cast<unsigned char>(symbol.front()))) {
    symbol.remove_prefix(1);
  }
  while (!symbol.empty() && std::isspace(static_cast<unsigned char>(symbol.back()))) {
    symbol.remove_suffix(1);
  }
  if (symbol.empty()) throw Error("missing symbol in free-rack element");
  FRElement x;
  x.u = words::parse_word(inner.substr(0, comma), alphabet, auto_add);
  x.a = alphabet.index_of(std::string(symbol), auto_add);
  return x;
}

FRElement parse(std::string_view s) {
  words::Alphabet alphabet;
  return parse(s, alphabet, true);
}

}  // namespace rackkex::freerack
