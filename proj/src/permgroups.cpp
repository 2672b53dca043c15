#include "rackkex/permgroups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace rackkex::permgroups {

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t v : images_) {
    if (v >= images_.size() || seen[v]) throw Error("image array is not a bijection");
    seen[v] = true;
  }
}

Perm Perm::identity(std::uint32_t degree) {
  std::vector<std::uint32_t> im(degree);
  for (std::uint32_t i = 0; i < degree; ++i) im[i] = i;
  return Perm(std::move(im));
}

Perm Perm::from_cycles(std::uint32_t degree,
                       const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::vector<std::uint32_t> im(degree);
  for (std::uint32_t i = 0; i < degree; ++i) im[i] = i;
  std::vector<bool> moved(degree, false);
  for (const auto& cyc : cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      std::uint32_t from = cyc[k];
      std::uint32_t to = cyc[(k + 1) % cyc.size()];
      if (from >= degree || to >= degree) throw Error("cycle point exceeds degree");
      if (moved[from]) throw Error("cycles are not disjoint");
      moved[from] = true;
      im[from] = to;
    }
  }
  return Perm(std::move(im));
}

Perm Perm::inverse() const {
  std::vector<std::uint32_t> im(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i) im[images_[i]] = i;
  return Perm(std::move(im));
}

bool Perm::is_identity() const {
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Perm compose(const Perm& g, const Perm& h) {
  if (g.degree() != h.degree()) throw Error("permutation degree mismatch");
  std::vector<std::uint32_t> im(g.degree());
  for (std::uint32_t i = 0; i < g.degree(); ++i) im[i] = g(h(i));
  return Perm(std::move(im));
}

Perm conj(const Perm& g, const Perm& h) {
  return compose(compose(g, h), g.inverse());
}

std::set<Perm> closure(const std::vector<Perm>& generators, std::size_t cap) {
  if (generators.empty()) throw Error("closure needs at least one generator");
  std::uint32_t degree = generators[0].degree();
  for (const Perm& g : generators) {
    if (g.degree() != degree) throw Error("permutation degree mismatch");
  }
  std::set<Perm> seen;
  std::deque<Perm> queue;
  seen.insert(Perm::identity(degree));
  queue.push_back(Perm::identity(degree));
  while (!queue.empty()) {
    Perm p = queue.front();
    queue.pop_front();
    for (const Perm& g : generators) {
      Perm q = compose(p, g);
      if (seen.insert(q).second) {
        if (seen.size() > cap) throw Error("closure cap exceeded");
        queue.push_back(q);
      }
    }
  }
  return seen;
}

bool PermGroup::contains(const Perm& p) const {
  return std::binary_search(elements.begin(), elements.end(), p);
}

PermGroup generate(const std::vector<Perm>& generators, std::size_t cap) {
  PermGroup group;
  group.generators = generators;
  auto set = closure(generators, cap);
  group.degree = generators[0].degree();
  group.elements.assign(set.begin(), set.end());
  return group;
}

std::vector<Perm> center(const PermGroup& group) {
  if (group.elements.empty()) throw Error("center needs materialized elements");
  std::vector<Perm> z;
  for (const Perm& c : group.elements) {
    bool central = true;
    for (const Perm& g : group.generators) {
      if (compose(c, g) != compose(g, c)) {
        central = false;
        break;
      }
    }
    if (central) z.push_back(c);
  }
  return z;
}

std::set<std::uint32_t> orbit(const std::vector<Perm>& generators, std::uint32_t point) {
  if (!generators.empty() && point >= generators[0].degree()) {
    throw Error("orbit point exceeds degree");
  }
  std::set<std::uint32_t> seen{point};
  std::deque<std::uint32_t> queue{point};
  while (!queue.empty()) {
    std::uint32_t p = queue.front();
    queue.pop_front();
    for (const Perm& g : generators) {
      std::uint32_t q = g(p);
      if (seen.insert(q).second) queue.push_back(q);
    }
  }
  return seen;
}

std::string cycle_text(const Perm& p) {
  std::string s;
  std::vector<bool> seen(p.degree(), false);
  for (std::uint32_t start = 0; start < p.degree(); ++start) {
    if (seen[start] || p(start) == start) continue;
    s += "(";
    std::uint32_t cur = start;
    bool first = true;
    do {
      if (!first) s += " ";
      first = false;
      s += std::to_string(cur);
      seen[cur] = true;
      cur = p(cur);
    } while (cur != start);
    s += ")";
  }
  if (s.empty()) s = "()";
  return s;
}

Perm parse_cycles(std::string_view text, std::uint32_t degree) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw Error("expected '(' in cycle notation");
    ++i;
    std::vector<std::uint32_t> cyc;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw Error("expected point in cycle notation");
      cyc.push_back(static_cast<std::uint32_t>(std::stoul(std::string(text.substr(start, i - start)))));
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip_ws();
      }
    }
    if (i == text.size()) throw Error("unterminated cycle");
    ++i;  // ')'
    if (cyc.size() == 1) throw Error("cycles of length 1 are omitted, not written");
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
    skip_ws();
  }
  return Perm::from_cycles(degree, cycles);
}

Bytes canonical_bytes(const Perm& p) {
  Bytes out;
  put_u32be(out, p.degree());
  for (std::uint32_t v : p.images()) put_u32be(out, v);
  return out;
}

Perm perm_from_reader(ByteReader& r) {
  std::uint32_t degree = r.u32be();
  std::vector<std::uint32_t> im(degree);
  for (std::uint32_t i = 0; i < degree; ++i) im[i] = r.u32be();
  return Perm(std::move(im));  // constructor validates bijection
}

}  // namespace rackkex::permgroups
