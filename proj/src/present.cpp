#include "rackkex/present.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <utility>

#include "rackkex/inn.hpp"

namespace rackkex::present {

namespace {

/// Character walker with line/column bookkeeping for parse errors.
struct Scanner {
  std::string_view s;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  [[noreturn]] void fail(const std::string& msg) const { fail_at(line, col, msg); }

  [[noreturn]] static void fail_at(std::size_t line, std::size_t col, const std::string& msg) {
    throw Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
  }

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }

  void advance() {
    if (eof()) return;
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
  }

  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) {
      fail(std::string("expected '") + c + "' " + what);
    }
    advance();
  }

  std::string identifier() {
    skip_ws();
    if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      fail("expected a name");
    }
    std::string out;
    while (!eof() &&
           (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      out.push_back(peek());
      advance();
    }
    return out;
  }
};

words::Word parse_relation_word(Scanner& sc, words::Alphabet& gens) {
  sc.skip_ws();
  if (sc.peek() == '1') {
    sc.advance();
    return {};
  }
  std::vector<words::Letter> letters;
  while (true) {
    sc.skip_ws();
    const auto at_line = sc.line;
    const auto at_col = sc.col;
    const auto name = sc.identifier();
    if (!gens.has(name)) {
      Scanner::fail_at(at_line, at_col, "undeclared generator '" + name + "'");
    }
    std::int8_t sign = +1;
    if (sc.accept('^')) {
      if (!sc.accept('-')) sc.fail("expected -1 after '^'");
      if (sc.peek() != '1') sc.fail("expected -1 after '^'");
      sc.advance();
      sign = -1;
    }
    letters.push_back({gens.index_of(name), sign});
    if (!sc.accept('*')) break;
  }
  return words::Word::reduced(letters);
}

freerack::FRElement parse_relation_side(Scanner& sc, words::Alphabet& gens) {
  sc.expect('(', "to open a relation side");
  freerack::FRElement e;
  e.u = parse_relation_word(sc, gens);
  sc.expect(',', "between word and symbol");
  sc.skip_ws();
  const auto at_line = sc.line;
  const auto at_col = sc.col;
  const auto name = sc.identifier();
  if (!gens.has(name)) {
    Scanner::fail_at(at_line, at_col, "undeclared generator '" + name + "'");
  }
  e.a = gens.index_of(name);
  sc.expect(')', "to close a relation side");
  return e;
}

}  // namespace

RackPresentation parse_rack_presentation(std::string_view text) {
  Scanner sc{text};
  RackPresentation P;
  sc.expect('<', "to open the presentation");
  while (true) {
    const auto name = sc.identifier();
    if (P.generators.has(name)) sc.fail("duplicate generator '" + name + "'");
    P.generators.add(name);
    if (!sc.accept(',')) break;
  }
  sc.expect('|', "between generators and relations");
  sc.skip_ws();
  if (sc.peek() != '>') {
    while (true) {
      RackRelation rel;
      rel.lhs = parse_relation_side(sc, P.generators);
      sc.expect('=', "between relation sides");
      rel.rhs = parse_relation_side(sc, P.generators);
      P.relations.push_back(std::move(rel));
      if (!sc.accept(',')) break;
    }
  }
  sc.expect('>', "to close the presentation");
  sc.skip_ws();
  if (!sc.eof()) sc.fail("trailing input after presentation");
  return P;
}

GroupPresentation env_from_presentation(const RackPresentation& P) {
  GroupPresentation G;
  G.generators = P.generators;
  const auto conj = [](const freerack::FRElement& e) {
    return e.u * words::Word::generator(e.a) * e.u.inverse();
  };
  for (const auto& rel : P.relations) {
    const auto relator = conj(rel.lhs) * conj(rel.rhs).inverse();
    if (!relator.identity()) G.relators.push_back(relator);
  }
  return G;
}

GroupPresentation env_from_table(const rackcore::FiniteRack& X) {
  GroupPresentation G;
  for (std::uint32_t i = 0; i < X.size(); ++i) G.generators.add(X.element_name(i));
  for (std::uint32_t a = 0; a < X.size(); ++a) {
    const auto ga = words::Word::generator(a);
    for (std::uint32_t b = 0; b < X.size(); ++b) {
      const auto relator = ga * words::Word::generator(b) * ga.inverse() *
                           words::Word::generator(X.op_index(a, b), -1);
      if (!relator.identity()) G.relators.push_back(relator);
    }
  }
  return G;
}

GroupPresentation present_operator_group(const rackcore::FiniteRack& X, std::size_t max_len) {
  GroupPresentation G;
  for (std::uint32_t i = 0; i < X.size(); ++i) G.generators.add(X.element_name(i));
  G.relators = inn::harvest_relations(X, max_len).relators;
  return G;
}

namespace {

std::string joined_generators(const words::Alphabet& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.declared(); ++i) {
    if (i) out += ", ";
    out += gens.name(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace

std::string emit_text(const GroupPresentation& P) {
  std::string out = "< " + joined_generators(P.generators) + " | ";
  for (std::size_t i = 0; i < P.relators.size(); ++i) {
    if (i) out += ", ";
    out += words::text(P.relators[i], P.generators);
  }
  if (!P.relators.empty()) out += " ";
  return out + ">";
}

std::string emit_text(const RackPresentation& P) {
  std::string out = "< " + joined_generators(P.generators) + " | ";
  for (std::size_t i = 0; i < P.relations.size(); ++i) {
    if (i) out += ", ";
    out += freerack::text(P.relations[i].lhs, P.generators) + " = " +
           freerack::text(P.relations[i].rhs, P.generators);
  }
  if (!P.relations.empty()) out += " ";
  return out + ">";
}

std::vector<std::vector<std::int64_t>> exponent_sums(const GroupPresentation& P) {
  const auto n = P.generators.declared();
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(P.relators.size());
  for (const auto& w : P.relators) {
    std::vector<std::int64_t> row(n, 0);
    for (const auto& l : w.letters()) {
      if (l.index >= n) throw Error("relator uses an undeclared generator");
      row[l.index] += l.sign;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint32_t integer_rank(std::vector<std::vector<std::int64_t>> m) {
  if (m.empty()) return 0;
  const auto cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    // Repeatedly reduce the column below the pivot row with the smallest
    // nonzero entry until one nonzero remains.
    while (true) {
      std::size_t best = m.size();
      for (std::size_t r = rank; r < m.size(); ++r) {
        if (m[r][col] != 0 && (best == m.size() || std::llabs(m[r][col]) < std::llabs(m[best][col]))) {
          best = r;
        }
      }
      if (best == m.size()) break;  // column exhausted
      std::swap(m[rank], m[best]);
      bool cleared = true;
      for (std::size_t r = rank + 1; r < m.size(); ++r) {
        if (m[r][col] == 0) continue;
        const auto q = m[r][col] / m[rank][col];
        for (std::size_t c = col; c < cols; ++c) m[r][c] -= q * m[rank][c];
        if (m[r][col] != 0) cleared = false;
      }
      if (cleared) {
        ++rank;
        break;
      }
    }
  }
  return static_cast<std::uint32_t>(rank);
}

std::uint32_t abelianization_rank(const GroupPresentation& P) {
  const auto n = static_cast<std::uint32_t>(P.generators.declared());
  const auto rows = exponent_sums(P);
  if (rows.empty()) return n;
  return n - integer_rank(rows);
}

}  // namespace rackkex::present
