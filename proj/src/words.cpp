#include "rackkex/words.hpp"

#include <algorithm>
#include <cctype>

namespace rackkex::words {

Word Word::reduced(const std::vector<Letter>& letters) {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw Error("letter sign must be +1 or -1");
    if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word Word::generator(std::uint32_t index, int sign) {
  if (sign != 1 && sign != -1) throw Error("letter sign must be +1 or -1");
  return Word({Letter{index, static_cast<std::int8_t>(sign)}});
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> stack = letters_;
  for (const Letter& l : rhs.letters_) {
    if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    out.push_back(words::inverse(*it));
  }
  return Word(std::move(out));
}

bool Word::operator<(const Word& rhs) const {
  return canonical_bytes(*this) < canonical_bytes(rhs);
}

bool is_positive(const Word& w) {
  if (w.identity()) throw Error("positivity is defined only for non-empty words");
  const auto& a = w.letters();
  Word wi = w.inverse();
  const auto& b = wi.letters();
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t ra = letter_rank(a[i]);
    std::uint64_t rb = letter_rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  // w == w^-1 would force w^2 == 1, impossible for non-empty reduced words.
  throw Error("reduced word equals its own inverse");
}

Bytes canonical_bytes(const Word& w) {
  Bytes out;
  append_canonical(out, w);
  return out;
}

void append_canonical(Bytes& out, const Word& w) {
  put_u32be(out, static_cast<std::uint32_t>(w.size()));
  for (const Letter& l : w.letters()) {
    if (l.index >= 0x7fffffffu) throw Error("symbol index out of encodable range");
    std::int32_t v = static_cast<std::int32_t>(l.index + 1);
    put_i32be(out, l.sign > 0 ? v : -v);
  }
}

Word word_from_reader(ByteReader& r) {
  std::uint32_t n = r.u32be();
  std::vector<Letter> letters;
  letters.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int32_t v = r.i32be();
    if (v == 0) throw Error("invalid word encoding: zero letter");
    std::uint32_t index = static_cast<std::uint32_t>(v > 0 ? v : -v) - 1;
    letters.push_back({index, static_cast<std::int8_t>(v > 0 ? 1 : -1)});
  }
  Word w = Word::reduced(letters);
  if (w.size() != letters.size()) throw Error("word encoding is not freely reduced");
  return w;
}

Word word_from_bytes(const Bytes& b) {
  ByteReader r(b);
  Word w = word_from_reader(r);
  if (!r.done()) throw Error("trailing bytes after word");
  return w;
}

Alphabet::Alphabet(std::vector<std::string> names) {
  for (auto& n : names) add(n);
}

std::uint32_t Alphabet::add(const std::string& name) {
  if (by_name_.count(name)) throw Error("duplicate symbol name: " + name);
  std::uint32_t idx = static_cast<std::uint32_t>(names_.size());
  names_.push_back(name);
  by_name_[name] = idx;
  return idx;
}

std::uint32_t Alphabet::index_of(const std::string& name, bool auto_add) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  if (auto_add) return add(name);
  throw Error("undeclared symbol: " + name);
}

bool Alphabet::has(const std::string& name) const { return by_name_.count(name) != 0; }

std::string Alphabet::name(std::uint32_t index) const {
  if (index < names_.size()) return names_[index];
  return "a" + std::to_string(index);
}

std::string text(const Word& w, const Alphabet& alphabet) {
  if (w.identity()) return "1";
  std::string s;
  bool first = true;
  for (const Letter& l : w.letters()) {
    if (!first) s += "*";
    first = false;
    s += alphabet.name(l.index);
    if (l.sign < 0) s += "^-1";
  }
  return s;
}

namespace {

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

Word parse_word(std::string_view s, Alphabet& alphabet, bool auto_add) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i < s.size() && s[i] == '1') {
    ++i;
    skip_ws();
    if (i != s.size()) throw Error("unexpected input after '1'");
    return Word();
  }
  std::vector<Letter> letters;
  while (true) {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && name_char(s[i])) ++i;
    if (i == start) throw Error("expected symbol name in word at offset " + std::to_string(i));
    std::string name(s.substr(start, i - start));
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') {
      throw Error("symbol name must start with a letter: " + name);
    }
    std::int8_t sign = +1;
    if (i + 2 < s.size() && s[i] == '^' && s[i + 1] == '-' && s[i + 2] == '1') {
      sign = -1;
      i += 3;
    }
    letters.push_back({alphabet.index_of(name, auto_add), sign});
    skip_ws();
    if (i == s.size()) break;
    if (s[i] != '*') throw Error("expected '*' between letters at offset " + std::to_string(i));
    ++i;
  }
  return Word::reduced(letters);
}

Word parse_word_default(std::string_view s) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i < s.size() && s[i] == '1' && (i + 1 == s.size() || !name_char(s[i + 1]))) {
    ++i;
    skip_ws();
    if (i != s.size()) throw Error("unexpected input after '1'");
    return Word();
  }
  std::vector<Letter> letters;
  while (true) {
    skip_ws();
    if (i >= s.size() || s[i] != 'a') throw Error("expected generator of the form a<i>");
    ++i;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw Error("expected generator index after 'a'");
    unsigned long idx = std::stoul(std::string(s.substr(start, i - start)));
    if (idx >= 0x7fffffffu) throw Error("generator index out of range");
    std::int8_t sign = +1;
    if (i + 2 < s.size() && s[i] == '^' && s[i + 1] == '-' && s[i + 2] == '1') {
      sign = -1;
      i += 3;
    }
    letters.push_back({static_cast<std::uint32_t>(idx), sign});
    skip_ws();
    if (i == s.size()) break;
    if (s[i] != '*') throw Error("expected '*' between letters");
    ++i;
  }
  return Word::reduced(letters);
}

}  // namespace rackkex::words
