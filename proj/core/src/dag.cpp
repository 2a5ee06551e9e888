#include "ess_sense/dag.hpp"

#include <algorithm>
#include <bit>

#include "ess_sense/errors.hpp"

namespace ess_sense {

Dag::Dag(std::vector<std::vector<int>> parent_sets) : parents_(std::move(parent_sets)) {
  const int n = size();
  for (int child = 0; child < n; ++child) {
    auto& ps = parents_[static_cast<std::size_t>(child)];
    std::sort(ps.begin(), ps.end());
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (ps[k] < 0 || ps[k] >= n) throw DomainError("parent index out of range");
      if (ps[k] == child) throw DomainError("node " + std::to_string(child) + " is its own parent");
      if (k > 0 && ps[k] == ps[k - 1]) throw DomainError("duplicate parent");
    }
  }
  if (topological_order().size() != static_cast<std::size_t>(n)) {
    throw DomainError("parent sets contain a directed cycle");
  }
}

Dag Dag::from_masks(std::span<const std::uint64_t> parent_masks) {
  std::vector<std::vector<int>> sets(parent_masks.size());
  for (std::size_t i = 0; i < parent_masks.size(); ++i) {
    for (std::uint64_t m = parent_masks[i]; m != 0; m &= m - 1) {
      sets[i].push_back(std::countr_zero(m));
    }
  }
  return Dag(std::move(sets));
}

bool Dag::has_edge(int from, int to) const {
  const auto ps = parents(to);
  return std::binary_search(ps.begin(), ps.end(), from);
}

std::size_t Dag::num_edges() const {
  std::size_t e = 0;
  for (const auto& ps : parents_) e += ps.size();
  return e;
}

std::vector<std::uint64_t> Dag::parent_masks() const {
  if (size() > 64) throw SizeError("bitmask view needs at most 64 nodes");
  std::vector<std::uint64_t> masks(parents_.size(), 0);
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    for (int p : parents_[i]) masks[i] |= std::uint64_t{1} << p;
  }
  return masks;
}

std::vector<int> Dag::topological_order() const {
  const auto n = parents_.size();
  std::vector<int> indegree(n);
  std::vector<std::vector<int>> children(n);
  for (std::size_t c = 0; c < n; ++c) {
    indegree[c] = static_cast<int>(parents_[c].size());
    for (int p : parents_[c]) children[static_cast<std::size_t>(p)].push_back(static_cast<int>(c));
  }
  std::vector<int> order;
  for (std::size_t c = 0; c < n; ++c) {
    if (indegree[c] == 0) order.push_back(static_cast<int>(c));
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int c : children[static_cast<std::size_t>(order[k])]) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) order.push_back(c);
    }
  }
  return order;
}

bool masks_acyclic(std::span<const std::uint64_t> parent_masks) {
  const auto n = parent_masks.size();
  std::uint64_t placed = 0;
  // Repeatedly place nodes whose parents are all placed.
  for (std::size_t round = 0; round < n; ++round) {
    bool progress = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(placed & bit) && (parent_masks[i] & ~placed) == 0) {
        placed |= bit;
        progress = true;
      }
    }
    if (!progress) break;
  }
  return std::popcount(placed) == static_cast<int>(n);
}

bool dag_tie_less(std::span<const std::uint64_t> lhs, std::span<const std::uint64_t> rhs) {
  const auto edges = [](std::span<const std::uint64_t> m) {
    int e = 0;
    for (auto x : m) e += std::popcount(x);
    return e;
  };
  const int el = edges(lhs);
  const int er = edges(rhs);
  if (el != er) return el < er;
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

}  // namespace ess_sense
