#include "rackkex/inn.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace rackkex::inn {

permgroups::Perm phi(const rackcore::FiniteRack& X, std::uint32_t a) {
  const auto n = X.size();
  if (a >= n) throw Error("element index out of range");
  std::vector<std::uint32_t> images(n);
  for (std::uint32_t b = 0; b < n; ++b) images[b] = X.op_index(a, b);
  return permgroups::Perm(std::move(images));
}

permgroups::Perm phi(const rackcore::FiniteRack& X, const rackcore::RackElement& a) {
  return phi(X, X.index_of(a));
}

permgroups::PermGroup inn_group(const rackcore::FiniteRack& X, std::size_t cap) {
  std::vector<permgroups::Perm> gens;
  gens.reserve(X.size());
  for (std::uint32_t a = 0; a < X.size(); ++a) gens.push_back(phi(X, a));
  return permgroups::generate(gens, cap);
}

bool is_connected(const rackcore::FiniteRack& X) {
  std::vector<permgroups::Perm> gens;
  gens.reserve(X.size());
  for (std::uint32_t a = 0; a < X.size(); ++a) gens.push_back(phi(X, a));
  return permgroups::orbit(gens, 0).size() == X.size();
}

bool phi_is_rack_hom(const rackcore::FiniteRack& X) {
  std::vector<permgroups::Perm> phis;
  phis.reserve(X.size());
  for (std::uint32_t a = 0; a < X.size(); ++a) phis.push_back(phi(X, a));
  for (std::uint32_t a = 0; a < X.size(); ++a) {
    for (std::uint32_t b = 0; b < X.size(); ++b) {
      if (phis[X.op_index(a, b)] != permgroups::conj(phis[a], phis[b])) return false;
    }
  }
  return true;
}

permgroups::Perm phi_word(const rackcore::FiniteRack& X, const words::Word& w) {
  auto acc = permgroups::Perm::identity(X.size());
  for (const auto& l : w.letters()) {
    if (l.index >= X.size()) throw Error("unknown element symbol in word");
    const auto p = phi(X, l.index);
    acc = permgroups::compose(acc, l.sign > 0 ? p : p.inverse());
  }
  return acc;
}

CenterKernelReport check_center_kernel(const rackcore::FiniteConjRack& X, std::size_t cap) {
  std::vector<permgroups::Perm> xs;
  xs.reserve(X.size());
  for (const auto& e : X.elements()) xs.push_back(e.as_perm());
  const auto G = permgroups::generate(xs, cap);

  // Φ(g) permutes the element indices of X by x ↦ g x g⁻¹. Conjugation by
  // any product of members of X keeps X stable, so the lookup never misses.
  const auto act = [&](const permgroups::Perm& g) {
    std::vector<std::uint32_t> images(X.size());
    for (std::uint32_t i = 0; i < X.size(); ++i) {
      const auto y = rackcore::RackElement::perm(permgroups::conj(g, xs[i]));
      const auto idx = X.find(y);
      if (!idx) throw Error("conjugation left the rack; seed was not closed");
      images[i] = *idx;
    }
    return permgroups::Perm(std::move(images));
  };

  CenterKernelReport report;
  report.group_order = G.order();

  std::set<permgroups::Perm> image;
  std::vector<permgroups::Perm> kernel;
  const auto id = permgroups::Perm::identity(X.size());
  for (const auto& g : G.elements) {
    const auto a = act(g);
    image.insert(a);
    if (a == id) kernel.push_back(g);
  }
  report.image_order = image.size();
  report.kernel_size = kernel.size();

  const auto inner = inn_group(X, cap);
  report.inn_order = inner.order();
  std::set<permgroups::Perm> inner_set(inner.elements.begin(), inner.elements.end());
  report.image_matches = image == inner_set;
  if (!report.image_matches) {
    for (const auto& p : image) {
      if (!inner_set.contains(p)) {
        report.witness = "image element outside Inn: " + permgroups::cycle_text(p);
        break;
      }
    }
    if (report.witness.empty()) {
      for (const auto& p : inner_set) {
        if (!image.contains(p)) {
          report.witness = "Inn element not realized: " + permgroups::cycle_text(p);
          break;
        }
      }
    }
  }

  const auto center = permgroups::center(G);
  report.center_size = center.size();
  std::vector<permgroups::Perm> kernel_sorted = kernel;
  std::sort(kernel_sorted.begin(), kernel_sorted.end());
  report.kernel_is_center = kernel_sorted == center;  // center() returns sorted elements
  if (!report.kernel_is_center && report.witness.empty()) {
    std::vector<permgroups::Perm> diff;
    std::set_symmetric_difference(kernel_sorted.begin(), kernel_sorted.end(), center.begin(),
                                  center.end(), std::back_inserter(diff));
    if (!diff.empty()) {
      report.witness = "kernel/center disagree at " + permgroups::cycle_text(diff.front());
    }
  }
  return report;
}

Harvest harvest_relations(const rackcore::FiniteRack& X, std::size_t max_len, std::size_t cap) {
  const auto n = X.size();
  std::vector<permgroups::Perm> phis;
  phis.reserve(n);
  for (std::uint32_t a = 0; a < n; ++a) phis.push_back(phi(X, a));

  struct NodeInfo {
    words::Word word;
    std::size_t depth = 0;
  };
  std::map<permgroups::Perm, NodeInfo> tree;
  std::deque<permgroups::Perm> queue;

  Harvest harvest;
  const auto root = permgroups::Perm::identity(n);
  tree.emplace(root, NodeInfo{});
  queue.push_back(root);
  bool truncated = false;

  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    const auto info = tree.at(p);
    if (info.depth >= max_len) {
      truncated = true;
      continue;
    }
    for (std::uint32_t a = 0; a < n; ++a) {
      const auto q = permgroups::compose(p, phis[a]);
      const auto step = info.word * words::Word::generator(a);
      auto it = tree.find(q);
      if (it == tree.end()) {
        if (tree.size() >= cap) throw Error("closure cap exceeded");
        tree.emplace(q, NodeInfo{step, info.depth + 1});
        queue.push_back(q);
      } else {
        const auto relator = step * it->second.word.inverse();
        if (!relator.identity()) harvest.relators.push_back(relator);
      }
    }
  }

  harvest.reached = tree.size();
  harvest.complete = !truncated;
  return harvest;
}

}  // namespace rackkex::inn
