#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rackkex/bytes.hpp"
#include "rackkex/permgroups.hpp"
#include "rackkex/rng.hpp"
#include "rackkex/thompson.hpp"
#include "rackkex/words.hpp"

namespace rackkex::rackcore {

class RackElement;

/// Index into a finite rack's element list.
struct TableIndex {
  std::uint32_t value = 0;
  friend bool operator==(const TableIndex&, const TableIndex&) = default;
};

/// Element of an extension rack: a base-rack element paired with a fiber index.
struct ExtPair {
  std::shared_ptr<const RackElement> base;
  std::uint32_t fiber = 0;
};

/// Opaque rack element. Equality and ordering are canonical-bytes equality,
/// so elements of different implementations never compare equal by accident.
class RackElement {
 public:
  using Payload =
      std::variant<TableIndex, permgroups::Perm, words::Word, thompson::Element, ExtPair>;

  explicit RackElement(Payload payload);

  static RackElement table(std::uint32_t index);
  static RackElement perm(permgroups::Perm p);
  static RackElement word(words::Word w);
  static RackElement thompson(thompson::Element e);
  static RackElement ext(RackElement base, std::uint32_t fiber);

  const Payload& payload() const { return payload_; }
  const Bytes& canonical() const { return bytes_; }

  const TableIndex& as_table() const;
  const permgroups::Perm& as_perm() const;
  const words::Word& as_word() const;
  const thompson::Element& as_thompson() const;
  const ExtPair& as_ext() const;

  friend bool operator==(const RackElement& a, const RackElement& b) {
    return a.bytes_ == b.bytes_;
  }
  friend bool operator<(const RackElement& a, const RackElement& b) {
    return a.bytes_ < b.bytes_;
  }

 private:
  Payload payload_;
  Bytes bytes_;
};

/// Group operations over one payload kind, used by conjugation racks.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual RackElement mul(const RackElement& a, const RackElement& b) const = 0;
  virtual RackElement inv(const RackElement& a) const = 0;
  virtual RackElement identity() const = 0;
  virtual bool valid(const RackElement& e) const = 0;
  virtual std::string text(const RackElement& e) const = 0;
  virtual RackElement parse(std::string_view s) const = 0;

  /// a b a^-1
  RackElement conj(const RackElement& a, const RackElement& b) const {
    return mul(mul(a, b), inv(a));
  }
  /// a^-1 c a
  RackElement conj_inv(const RackElement& a, const RackElement& c) const {
    return mul(mul(inv(a), c), a);
  }
};

class PermGroupModel : public GroupModel {
 public:
  explicit PermGroupModel(std::uint32_t degree) : degree_(degree) {}
  std::uint32_t degree() const { return degree_; }
  RackElement mul(const RackElement& a, const RackElement& b) const override;
  RackElement inv(const RackElement& a) const override;
  RackElement identity() const override;
  bool valid(const RackElement& e) const override;
  std::string text(const RackElement& e) const override;
  RackElement parse(std::string_view s) const override;

 private:
  std::uint32_t degree_;
};

/// Free group F(A) over the countable default alphabet.
class FreeGroupModel : public GroupModel {
 public:
  RackElement mul(const RackElement& a, const RackElement& b) const override;
  RackElement inv(const RackElement& a) const override;
  RackElement identity() const override;
  bool valid(const RackElement& e) const override;
  std::string text(const RackElement& e) const override;
  RackElement parse(std::string_view s) const override;
};

class ThompsonGroupModel : public GroupModel {
 public:
  RackElement mul(const RackElement& a, const RackElement& b) const override;
  RackElement inv(const RackElement& a) const override;
  RackElement identity() const override;
  bool valid(const RackElement& e) const override;
  std::string text(const RackElement& e) const override;
  RackElement parse(std::string_view s) const override;
};

/// Abstract rack: a set with a left-distributive operation whose left
/// multiplications are bijections.
class Rack {
 public:
  virtual ~Rack() = default;

  virtual bool finite() const = 0;
  /// a ▷ b
  virtual RackElement op(const RackElement& a, const RackElement& b) const = 0;
  /// The unique b with a ▷ b = c.
  virtual RackElement ldiv(const RackElement& a, const RackElement& c) const = 0;
  virtual bool contains(const RackElement& e) const = 0;
  virtual RackElement sample(Rng& rng) const = 0;
  /// Decode canonical bytes, validating membership.
  virtual RackElement element_from_bytes(const Bytes& bytes) const = 0;
  virtual std::string element_text(const RackElement& e) const = 0;
  virtual RackElement parse_element(std::string_view text) const = 0;
  /// Non-null when the rack operation is conjugation in an ambient group.
  virtual const GroupModel* conjugation_model() const { return nullptr; }
};

/// Finite rack with materialized elements and operation table.
class FiniteRack : public Rack {
 public:
  bool finite() const override { return true; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(elements_.size()); }
  const std::vector<RackElement>& elements() const { return elements_; }
  const RackElement& element(std::uint32_t i) const;
  /// Throws a membership error when the element is not in the rack.
  std::uint32_t index_of(const RackElement& e) const;
  std::optional<std::uint32_t> find(const RackElement& e) const;

  std::uint32_t op_index(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t ldiv_index(std::uint32_t a, std::uint32_t c) const;
  /// Symbol name used in presentations; defaults to x<i>.
  std::string element_name(std::uint32_t i) const;
  std::uint32_t index_of_name(const std::string& name) const;

  RackElement op(const RackElement& a, const RackElement& b) const override;
  RackElement ldiv(const RackElement& a, const RackElement& c) const override;
  bool contains(const RackElement& e) const override;
  RackElement sample(Rng& rng) const override;
  RackElement element_from_bytes(const Bytes& bytes) const override;

 protected:
  /// table[a][b] must have bijective rows; left-distributivity is the
  /// caller's responsibility (constructors validate or guarantee it).
  void init(std::vector<RackElement> elements,
            std::vector<std::vector<std::uint32_t>> table,
            std::vector<std::string> names);

 private:
  std::vector<RackElement> elements_;
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::vector<std::uint32_t>> ldiv_;
  std::map<Bytes, std::uint32_t> index_;
  std::vector<std::string> names_;
};

/// Unvalidated operation table; input to the axiom checker.
struct TableCandidate {
  std::uint32_t n = 0;
  std::vector<std::vector<std::uint32_t>> table;
};

struct AxiomReport {
  bool a1_ok = false;  // left-distributivity
  bool a2_ok = false;  // rows bijective
  bool a3_ok = false;  // diagonal fixed
  std::optional<std::array<std::uint32_t, 3>> a1_witness;  // (a,b,c)
  std::optional<std::uint32_t> a2_witness;                 // failing row
  std::optional<std::uint32_t> a3_witness;                 // a with a▷a != a

  bool rack() const { return a1_ok && a2_ok; }
  bool quandle() const { return rack() && a3_ok; }
};

/// Exhaustive axiom check: A1 over all n^3 triples, A2 per row, A3 on the
/// diagonal; the first failing witness of each axiom is reported.
AxiomReport check_rack_axioms(const TableCandidate& t);

/// i ▷ j = 2i - j mod n (dihedral quandle R_n)
TableCandidate dihedral_table(std::uint32_t n);
/// i ▷ j = j + 1 mod n (cyclic rack C_n; fails A3 for n >= 2)
TableCandidate cyclic_table(std::uint32_t n);
/// i ▷ j = j
TableCandidate trivial_table(std::uint32_t n);

class TableRack : public FiniteRack {
 public:
  /// Validates A1 and A2; throws with the witness on failure.
  explicit TableRack(const TableCandidate& t, std::vector<std::string> names = {});
  const TableCandidate& candidate() const { return candidate_; }
  std::string element_text(const RackElement& e) const override;
  RackElement parse_element(std::string_view text) const override;

 private:
  TableCandidate candidate_;
};

/// Finite subset of a group closed under conjugation.
class FiniteConjRack : public FiniteRack {
 public:
  /// Elements must be closed under conjugation; throws otherwise.
  FiniteConjRack(std::shared_ptr<const GroupModel> model, std::vector<RackElement> elements);
  const GroupModel* conjugation_model() const override { return model_.get(); }
  std::string element_text(const RackElement& e) const override;
  RackElement parse_element(std::string_view text) const override;

 private:
  std::shared_ptr<const GroupModel> model_;
};

/// Smallest superset of the seed closed under a ▷ b = a b a^-1.
/// Throws once the set would exceed cap.
std::vector<RackElement> conj_closure(const GroupModel& model,
                                      const std::vector<RackElement>& seed,
                                      std::size_t cap = permgroups::kDefaultClosureCap);

/// The whole finite group with the conjugation operation.
std::shared_ptr<FiniteConjRack> group_rack(const permgroups::PermGroup& group);

/// Group rack over Thompson's group F: infinite, membership by normal-form
/// validity, sampling by bounded random generator words.
class ThompsonRack : public Rack {
 public:
  ThompsonRack(std::uint32_t max_generator, std::uint32_t sample_length);

  bool finite() const override { return false; }
  RackElement op(const RackElement& a, const RackElement& b) const override;
  RackElement ldiv(const RackElement& a, const RackElement& c) const override;
  bool contains(const RackElement& e) const override;
  RackElement sample(Rng& rng) const override;
  RackElement element_from_bytes(const Bytes& bytes) const override;
  std::string element_text(const RackElement& e) const override;
  RackElement parse_element(std::string_view text) const override;
  const GroupModel* conjugation_model() const override { return &model_; }

  std::uint32_t max_generator() const { return max_generator_; }
  std::uint32_t sample_length() const { return sample_length_; }

 private:
  ThompsonGroupModel model_;
  std::uint32_t max_generator_;
  std::uint32_t sample_length_;
};

/// f maps X indices to Y indices; true iff f(a▷b) = f(a)▷f(b) for all pairs.
bool hom_check(const std::vector<std::uint32_t>& f, const FiniteRack& X, const FiniteRack& Y);

/// Operation table of a finite rack in index form, e.g. for re-running the
/// axiom checker against a constructed rack.
TableCandidate table_of(const FiniteRack& X);

}  // namespace rackkex::rackcore
