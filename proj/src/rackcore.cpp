#include "rackkex/rackcore.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <utility>

namespace rackkex::rackcore {

namespace {

Bytes encode_payload(const RackElement::Payload& payload) {
  Bytes out;
  if (const auto* t = std::get_if<TableIndex>(&payload)) {
    put_u32be(out, t->value);
  } else if (const auto* p = std::get_if<permgroups::Perm>(&payload)) {
    out = permgroups::canonical_bytes(*p);
  } else if (const auto* w = std::get_if<words::Word>(&payload)) {
    out = words::canonical_bytes(*w);
  } else if (const auto* e = std::get_if<thompson::Element>(&payload)) {
    out = thompson::canonical_bytes(*e);
  } else {
    const auto& pair = std::get<ExtPair>(payload);
    out = pair.base->canonical();
    put_u32be(out, pair.fiber);
  }
  return out;
}

}  // namespace

RackElement::RackElement(Payload payload)
    : payload_(std::move(payload)), bytes_(encode_payload(payload_)) {}

RackElement RackElement::table(std::uint32_t index) { return RackElement(TableIndex{index}); }
RackElement RackElement::perm(permgroups::Perm p) { return RackElement(Payload(std::move(p))); }
RackElement RackElement::word(words::Word w) { return RackElement(Payload(std::move(w))); }
RackElement RackElement::thompson(thompson::Element e) {
  return RackElement(Payload(std::move(e)));
}
RackElement RackElement::ext(RackElement base, std::uint32_t fiber) {
  return RackElement(ExtPair{std::make_shared<const RackElement>(std::move(base)), fiber});
}

const TableIndex& RackElement::as_table() const {
  if (const auto* t = std::get_if<TableIndex>(&payload_)) return *t;
  throw Error("element is not a table-rack element");
}

const permgroups::Perm& RackElement::as_perm() const {
  if (const auto* p = std::get_if<permgroups::Perm>(&payload_)) return *p;
  throw Error("element is not a permutation");
}

const words::Word& RackElement::as_word() const {
  if (const auto* w = std::get_if<words::Word>(&payload_)) return *w;
  throw Error("element is not a free-group word");
}

const thompson::Element& RackElement::as_thompson() const {
  if (const auto* e = std::get_if<thompson::Element>(&payload_)) return *e;
  throw Error("element is not a Thompson group element");
}

const ExtPair& RackElement::as_ext() const {
  if (const auto* e = std::get_if<ExtPair>(&payload_)) return *e;
  throw Error("element is not an extension pair");
}

RackElement PermGroupModel::mul(const RackElement& a, const RackElement& b) const {
  return RackElement::perm(permgroups::compose(a.as_perm(), b.as_perm()));
}

RackElement PermGroupModel::inv(const RackElement& a) const {
  return RackElement::perm(a.as_perm().inverse());
}

RackElement PermGroupModel::identity() const {
  return RackElement::perm(permgroups::Perm::identity(degree_));
}

bool PermGroupModel::valid(const RackElement& e) const {
  const auto* p = std::get_if<permgroups::Perm>(&e.payload());
  return p != nullptr && p->degree() == degree_;
}

std::string PermGroupModel::text(const RackElement& e) const {
  return permgroups::cycle_text(e.as_perm());
}

RackElement PermGroupModel::parse(std::string_view s) const {
  return RackElement::perm(permgroups::parse_cycles(s, degree_));
}

RackElement FreeGroupModel::mul(const RackElement& a, const RackElement& b) const {
  return RackElement::word(a.as_word() * b.as_word());
}

RackElement FreeGroupModel::inv(const RackElement& a) const {
  return RackElement::word(a.as_word().inverse());
}

RackElement FreeGroupModel::identity() const { return RackElement::word(words::Word()); }

bool FreeGroupModel::valid(const RackElement& e) const {
  return std::holds_alternative<words::Word>(e.payload());
}

std::string FreeGroupModel::text(const RackElement& e) const {
  return words::text(e.as_word());
}

RackElement FreeGroupModel::parse(std::string_view s) const {
  return RackElement::word(words::parse_word_default(s));
}

RackElement ThompsonGroupModel::mul(const RackElement& a, const RackElement& b) const {
  return RackElement::thompson(a.as_thompson() * b.as_thompson());
}

RackElement ThompsonGroupModel::inv(const RackElement& a) const {
  return RackElement::thompson(a.as_thompson().inverse());
}

RackElement ThompsonGroupModel::identity() const {
  return RackElement::thompson(thompson::Element());
}

bool ThompsonGroupModel::valid(const RackElement& e) const {
  return std::holds_alternative<thompson::Element>(e.payload());
}

std::string ThompsonGroupModel::text(const RackElement& e) const {
  return thompson::text(e.as_thompson());
}

RackElement ThompsonGroupModel::parse(std::string_view s) const {
  return RackElement::thompson(thompson::parse(s));
}

const RackElement& FiniteRack::element(std::uint32_t i) const {
  if (i >= elements_.size()) throw Error("element index out of range");
  return elements_[i];
}

std::uint32_t FiniteRack::index_of(const RackElement& e) const {
  auto it = index_.find(e.canonical());
  if (it == index_.end()) throw Error("element is not a member of the rack");
  return it->second;
}

std::optional<std::uint32_t> FiniteRack::find(const RackElement& e) const {
  auto it = index_.find(e.canonical());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FiniteRack::op_index(std::uint32_t a, std::uint32_t b) const {
  if (a >= size() || b >= size()) throw Error("element index out of range");
  return table_[a][b];
}

std::uint32_t FiniteRack::ldiv_index(std::uint32_t a, std::uint32_t c) const {
  if (a >= size() || c >= size()) throw Error("element index out of range");
  return ldiv_[a][c];
}

std::string FiniteRack::element_name(std::uint32_t i) const {
  if (i >= size()) throw Error("element index out of range");
  if (i < names_.size() && !names_[i].empty()) return names_[i];
  return "x" + std::to_string(i);
}

std::uint32_t FiniteRack::index_of_name(const std::string& name) const {
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (element_name(i) == name) return i;
  }
  throw Error("unknown element name: " + name);
}

RackElement FiniteRack::op(const RackElement& a, const RackElement& b) const {
  return elements_[table_[index_of(a)][index_of(b)]];
}

RackElement FiniteRack::ldiv(const RackElement& a, const RackElement& c) const {
  return elements_[ldiv_[index_of(a)][index_of(c)]];
}

bool FiniteRack::contains(const RackElement& e) const { return find(e).has_value(); }

RackElement FiniteRack::sample(Rng& rng) const {
  if (elements_.empty()) throw Error("cannot sample from an empty rack");
  return elements_[rng.below(size())];
}

RackElement FiniteRack::element_from_bytes(const Bytes& bytes) const {
  auto it = index_.find(bytes);
  if (it == index_.end()) throw Error("encoded element is not a member of the rack");
  return elements_[it->second];
}

void FiniteRack::init(std::vector<RackElement> elements,
                      std::vector<std::vector<std::uint32_t>> table,
                      std::vector<std::string> names) {
  const auto n = elements.size();
  if (n == 0) throw Error("rack must be nonempty");
  if (table.size() != n) throw Error("operation table has wrong number of rows");
  std::vector<std::vector<std::uint32_t>> ldiv(n, std::vector<std::uint32_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) throw Error("operation table row has wrong length");
    std::vector<bool> seen(n, false);
    for (std::size_t b = 0; b < n; ++b) {
      const auto c = table[a][b];
      if (c >= n) throw Error("operation table entry out of range");
      if (seen[c]) throw Error("left multiplication is not injective");
      seen[c] = true;
      ldiv[a][c] = static_cast<std::uint32_t>(b);
    }
  }
  std::map<Bytes, std::uint32_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(elements[i].canonical(), static_cast<std::uint32_t>(i)).second) {
      throw Error("duplicate element in rack");
    }
  }
  elements_ = std::move(elements);
  table_ = std::move(table);
  ldiv_ = std::move(ldiv);
  index_ = std::move(index);
  names_ = std::move(names);
}

AxiomReport check_rack_axioms(const TableCandidate& t) {
  const std::uint32_t n = t.n;
  if (n == 0) throw Error("operation table must be nonempty");
  if (t.table.size() != n) throw Error("operation table has wrong number of rows");
  for (const auto& row : t.table) {
    if (row.size() != n) throw Error("operation table row has wrong length");
    for (auto v : row) {
      if (v >= n) throw Error("operation table entry out of range");
    }
  }

  AxiomReport report;
  report.a1_ok = true;
  report.a2_ok = true;
  report.a3_ok = true;

  for (std::uint32_t a = 0; a < n && report.a1_ok; ++a) {
    for (std::uint32_t b = 0; b < n && report.a1_ok; ++b) {
      for (std::uint32_t c = 0; c < n; ++c) {
        const auto lhs = t.table[a][t.table[b][c]];
        const auto rhs = t.table[t.table[a][b]][t.table[a][c]];
        if (lhs != rhs) {
          report.a1_ok = false;
          report.a1_witness = {a, b, c};
          break;
        }
      }
    }
  }

  for (std::uint32_t a = 0; a < n; ++a) {
    std::vector<bool> seen(n, false);
    bool ok = true;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (seen[t.table[a][b]]) {
        ok = false;
        break;
      }
      seen[t.table[a][b]] = true;
    }
    if (!ok) {
      report.a2_ok = false;
      report.a2_witness = a;
      break;
    }
  }

  for (std::uint32_t a = 0; a < n; ++a) {
    if (t.table[a][a] != a) {
      report.a3_ok = false;
      report.a3_witness = a;
      break;
    }
  }

  return report;
}

TableCandidate dihedral_table(std::uint32_t n) {
  if (n == 0) throw Error("rack must be nonempty");
  TableCandidate t;
  t.n = n;
  t.table.assign(n, std::vector<std::uint32_t>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      t.table[i][j] = (2 * i % n + n - j % n) % n;
    }
  }
  return t;
}

TableCandidate cyclic_table(std::uint32_t n) {
  if (n == 0) throw Error("rack must be nonempty");
  TableCandidate t;
  t.n = n;
  t.table.assign(n, std::vector<std::uint32_t>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      t.table[i][j] = (j + 1) % n;
    }
  }
  return t;
}

TableCandidate trivial_table(std::uint32_t n) {
  if (n == 0) throw Error("rack must be nonempty");
  TableCandidate t;
  t.n = n;
  t.table.assign(n, std::vector<std::uint32_t>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      t.table[i][j] = j;
    }
  }
  return t;
}

TableRack::TableRack(const TableCandidate& t, std::vector<std::string> names) : candidate_(t) {
  const auto report = check_rack_axioms(t);
  if (!report.a2_ok) {
    throw Error("not a rack: left multiplication by " + std::to_string(*report.a2_witness) +
                " is not a bijection");
  }
  if (!report.a1_ok) {
    const auto& w = *report.a1_witness;
    throw Error("not a rack: self-distributivity fails at (" + std::to_string(w[0]) + ", " +
                std::to_string(w[1]) + ", " + std::to_string(w[2]) + ")");
  }
  std::vector<RackElement> elements;
  elements.reserve(t.n);
  for (std::uint32_t i = 0; i < t.n; ++i) elements.push_back(RackElement::table(i));
  init(std::move(elements), t.table, std::move(names));
}

std::string TableRack::element_text(const RackElement& e) const {
  return std::to_string(index_of(e));
}

RackElement TableRack::parse_element(std::string_view text) const {
  std::uint32_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error("expected a decimal element index, got '" + std::string(text) + "'");
  }
  if (value >= size()) throw Error("element index out of range");
  return element(value);
}

FiniteConjRack::FiniteConjRack(std::shared_ptr<const GroupModel> model,
                               std::vector<RackElement> elements)
    : model_(std::move(model)) {
  if (!model_) throw Error("conjugation rack needs a group model");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  const auto n = elements.size();
  if (n == 0) throw Error("rack must be nonempty");

  std::map<Bytes, std::uint32_t> where;
  for (std::size_t i = 0; i < n; ++i) {
    if (!model_->valid(elements[i])) throw Error("element does not belong to the ambient group");
    where.emplace(elements[i].canonical(), static_cast<std::uint32_t>(i));
  }

  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto c = model_->conj(elements[a], elements[b]);
      auto it = where.find(c.canonical());
      if (it == where.end()) {
        throw Error("set is not closed under conjugation");
      }
      table[a][b] = it->second;
    }
  }
  init(std::move(elements), std::move(table), {});
}

std::string FiniteConjRack::element_text(const RackElement& e) const {
  return model_->text(element(index_of(e)));
}

RackElement FiniteConjRack::parse_element(std::string_view text) const {
  const auto e = model_->parse(text);
  if (!contains(e)) throw Error("element is not a member of the rack");
  return e;
}

std::vector<RackElement> conj_closure(const GroupModel& model,
                                      const std::vector<RackElement>& seed,
                                      std::size_t cap) {
  if (seed.empty()) throw Error("conjugation closure needs a nonempty seed");
  std::set<RackElement> out;
  std::deque<RackElement> frontier;
  for (const auto& e : seed) {
    if (!model.valid(e)) throw Error("seed element does not belong to the ambient group");
    if (out.insert(e).second) frontier.push_back(e);
  }
  while (!frontier.empty()) {
    const auto a = frontier.front();
    frontier.pop_front();
    // New products can appear with the new element in either slot, so pair it
    // against everything collected so far.
    std::vector<RackElement> fresh;
    for (const auto& b : out) {
      for (const auto& c : {model.conj(a, b), model.conj(b, a)}) {
        if (!out.contains(c)) fresh.push_back(c);
      }
    }
    for (auto& c : fresh) {
      if (out.insert(c).second) {
        if (out.size() > cap) throw Error("closure cap exceeded");
        frontier.push_back(std::move(c));
      }
    }
  }
  return {out.begin(), out.end()};
}

std::shared_ptr<FiniteConjRack> group_rack(const permgroups::PermGroup& group) {
  auto model = std::make_shared<PermGroupModel>(group.degree);
  std::vector<RackElement> elements;
  elements.reserve(group.elements.size());
  for (const auto& p : group.elements) elements.push_back(RackElement::perm(p));
  return std::make_shared<FiniteConjRack>(std::move(model), std::move(elements));
}

ThompsonRack::ThompsonRack(std::uint32_t max_generator, std::uint32_t sample_length)
    : max_generator_(max_generator), sample_length_(sample_length) {
  if (max_generator_ == 0) throw Error("need at least one generator to sample from");
  if (sample_length_ == 0) throw Error("sample length must be positive");
}

RackElement ThompsonRack::op(const RackElement& a, const RackElement& b) const {
  return model_.conj(a, b);
}

RackElement ThompsonRack::ldiv(const RackElement& a, const RackElement& c) const {
  return model_.conj_inv(a, c);
}

bool ThompsonRack::contains(const RackElement& e) const { return model_.valid(e); }

RackElement ThompsonRack::sample(Rng& rng) const {
  const std::uint32_t len = 1 + rng.below(sample_length_);
  words::Word w;
  for (std::uint32_t i = 0; i < len; ++i) {
    const auto index = rng.below(max_generator_);
    const std::int8_t sign = rng.coin() ? 1 : -1;
    w = w * words::Word::generator(index, sign);
  }
  return RackElement::thompson(thompson::Element::from_word(w));
}

RackElement ThompsonRack::element_from_bytes(const Bytes& bytes) const {
  return RackElement::thompson(thompson::element_from_bytes(bytes));
}

std::string ThompsonRack::element_text(const RackElement& e) const {
  return thompson::text(e.as_thompson());
}

RackElement ThompsonRack::parse_element(std::string_view text) const {
  return RackElement::thompson(thompson::parse(text));
}

TableCandidate table_of(const FiniteRack& X) {
  TableCandidate t;
  t.n = X.size();
  t.table.assign(t.n, std::vector<std::uint32_t>(t.n, 0));
  for (std::uint32_t a = 0; a < t.n; ++a) {
    for (std::uint32_t b = 0; b < t.n; ++b) {
      t.table[a][b] = X.op_index(a, b);
    }
  }
  return t;
}

bool hom_check(const std::vector<std::uint32_t>& f, const FiniteRack& X, const FiniteRack& Y) {
  if (f.size() != X.size()) throw Error("map has wrong domain size");
  for (auto v : f) {
    if (v >= Y.size()) throw Error("map image out of range");
  }
  for (std::uint32_t a = 0; a < X.size(); ++a) {
    for (std::uint32_t b = 0; b < X.size(); ++b) {
      if (f[X.op_index(a, b)] != Y.op_index(f[a], f[b])) return false;
    }
  }
  return true;
}

}  // namespace rackkex::rackcore
