#include "rackkex/thompson.hpp"

#include <algorithm>
#include <limits>

namespace rackkex::thompson {

namespace {

constexpr std::uint32_t kMaxIndex = 0x7ffffffeu;

void bump(std::uint32_t& index) {
  if (index >= kMaxIndex) throw Error("generator index overflow during rewriting");
  ++index;
}

bool part_has_index(const std::vector<Block>& part, std::uint32_t index) {
  auto it = std::lower_bound(part.begin(), part.end(), index,
                             [](const Block& b, std::uint32_t v) { return b.index < v; });
  return it != part.end() && it->index == index;
}

}  // namespace

// Right-multiply the seminormal form by a_index^sign. The rewriting uses the
// relation family a_j a_i = a_i a_{j+1} (i < j) and free cancellation; the
// block lists stay sorted by strictly increasing index throughout.
void Element::push_letter(std::uint32_t index, int sign) {
  std::uint32_t k = index;
  if (sign > 0) {
    // The letter enters right of the negative part and travels left.
    // Negative blocks are stored by increasing index = right-to-left in the
    // word, so traversal is front to back.
    for (std::size_t i = 0; i < neg_.size(); ++i) {
      Block& b = neg_[i];
      if (k < b.index) {
        bump(b.index);  // a_j^-1 a_k -> a_k a_{j+1}^-1
      } else if (k == b.index) {
        if (--b.exponent == 0) neg_.erase(neg_.begin() + i);
        return;  // cancelled
      } else {
        // a_j^-1 a_k -> a_{k+1} a_j^-1 once per copy
        if (b.exponent > kMaxIndex - k) throw Error("generator index overflow during rewriting");
        k += b.exponent;
      }
    }
    // Merge into the positive part from the right; passed blocks shift up.
    std::size_t i = pos_.size();
    while (i > 0 && pos_[i - 1].index > k) {
      bump(pos_[i - 1].index);  // a_j a_k -> a_k a_{j+1}
      --i;
    }
    if (i > 0 && pos_[i - 1].index == k) {
      pos_[i - 1].exponent += 1;
    } else {
      pos_.insert(pos_.begin() + i, Block{k, 1});
    }
  } else {
    // The letter a_k^-1 travels left through smaller-index negative blocks,
    // incrementing itself per copy passed.
    std::size_t i = 0;
    for (; i < neg_.size(); ++i) {
      Block& b = neg_[i];
      if (b.index < k) {
        if (b.exponent > kMaxIndex - k) throw Error("generator index overflow during rewriting");
        k += b.exponent;  // a_j^-1 a_k^-1 -> a_{k+1}^-1 a_j^-1
      } else if (b.index == k) {
        b.exponent += 1;
        return;
      } else {
        break;
      }
    }
    if (i < neg_.size()) {
      neg_.insert(neg_.begin() + i, Block{k, 1});
      return;
    }
    // Passed the whole negative part; cancel against the last positive block
    // when the indices agree, otherwise open a new negative block.
    if (!pos_.empty() && pos_.back().index == k) {
      if (--pos_.back().exponent == 0) pos_.pop_back();
      return;
    }
    neg_.push_back(Block{k, 1});
  }
}

// Reduce a seminormal form to the normal form: while some index occurs in
// both parts with the successor index in neither, drop one factor pair and
// shift every higher index down.
void Element::normalize() {
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t pi = 0, ni = 0;
    while (pi < pos_.size() && ni < neg_.size()) {
      if (pos_[pi].index < neg_[ni].index) {
        ++pi;
      } else if (pos_[pi].index > neg_[ni].index) {
        ++ni;
      } else {
        std::uint32_t i = pos_[pi].index;
        if (!part_has_index(pos_, i + 1) && !part_has_index(neg_, i + 1)) {
          if (--pos_[pi].exponent == 0) pos_.erase(pos_.begin() + pi);
          if (--neg_[ni].exponent == 0) neg_.erase(neg_.begin() + ni);
          for (Block& b : pos_) {
            if (b.index > i) --b.index;
          }
          for (Block& b : neg_) {
            if (b.index > i) --b.index;
          }
          changed = true;
          break;
        }
        ++pi;
        ++ni;
      }
    }
  }
}

Element Element::from_word(const words::Word& w) {
  Element e;
  for (const words::Letter& l : w.letters()) e.push_letter(l.index, l.sign);
  e.normalize();
  return e;
}

Element Element::operator*(const Element& rhs) const {
  Element out = *this;
  for (const Block& b : rhs.pos_) {
    for (std::uint32_t i = 0; i < b.exponent; ++i) out.push_letter(b.index, +1);
  }
  for (auto it = rhs.neg_.rbegin(); it != rhs.neg_.rend(); ++it) {
    for (std::uint32_t i = 0; i < it->exponent; ++i) out.push_letter(it->index, -1);
  }
  out.normalize();
  return out;
}

// Swapping the parts inverts the element; the normal-form condition is
// symmetric in the parts, so no renormalization is needed.
Element Element::inverse() const {
  Element out;
  out.pos_ = neg_;
  out.neg_ = pos_;
  return out;
}

Element conjugate(const Element& g, const Element& h) {
  return g * h * g.inverse();
}

words::Word Element::to_word() const {
  std::vector<words::Letter> letters;
  for (const Block& b : pos_) {
    for (std::uint32_t i = 0; i < b.exponent; ++i) letters.push_back({b.index, +1});
  }
  for (auto it = neg_.rbegin(); it != neg_.rend(); ++it) {
    for (std::uint32_t i = 0; i < it->exponent; ++i) letters.push_back({it->index, -1});
  }
  return words::Word::reduced(letters);
}

void Element::check_block_invariants() const {
  for (const auto* part : {&pos_, &neg_}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      if ((*part)[i].exponent == 0) throw Error("invalid normal form: zero exponent");
      if (i > 0 && (*part)[i - 1].index >= (*part)[i].index) {
        throw Error("invalid normal form: indices not strictly increasing");
      }
    }
  }
  for (const Block& b : pos_) {
    if (part_has_index(neg_, b.index) && !part_has_index(pos_, b.index + 1) &&
        !part_has_index(neg_, b.index + 1)) {
      throw Error("invalid normal form: cancellable pair present");
    }
  }
}

Bytes canonical_bytes(const Element& e) {
  Bytes out;
  append_canonical(out, e);
  return out;
}

void append_canonical(Bytes& out, const Element& e) {
  put_u32be(out, static_cast<std::uint32_t>(e.positive_part().size()));
  for (const Block& b : e.positive_part()) {
    put_u32be(out, b.index);
    put_u32be(out, b.exponent);
  }
  put_u32be(out, static_cast<std::uint32_t>(e.negative_part().size()));
  for (const Block& b : e.negative_part()) {
    put_u32be(out, b.index);
    put_u32be(out, b.exponent);
  }
}

Element element_from_reader(ByteReader& r) {
  Element e;
  std::uint32_t np = r.u32be();
  for (std::uint32_t i = 0; i < np; ++i) {
    std::uint32_t index = r.u32be();
    std::uint32_t exponent = r.u32be();
    e.pos_.push_back(Block{index, exponent});
  }
  std::uint32_t nn = r.u32be();
  for (std::uint32_t i = 0; i < nn; ++i) {
    std::uint32_t index = r.u32be();
    std::uint32_t exponent = r.u32be();
    e.neg_.push_back(Block{index, exponent});
  }
  e.check_block_invariants();
  return e;
}

Element element_from_bytes(const Bytes& b) {
  ByteReader r(b);
  Element e = element_from_reader(r);
  if (!r.done()) throw Error("trailing bytes after element");
  return e;
}

std::string text(const Element& e) {
  return words::text(e.to_word());
}

Element parse(std::string_view s) {
  return Element::from_word(words::parse_word_default(s));
}

}  // namespace rackkex::thompson
