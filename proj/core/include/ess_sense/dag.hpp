#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ess_sense {

// Directed acyclic graph as one parent set per node. Parent lists are kept
// sorted ascending, so two Dags are equal iff they have the same edges.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n) : parents_(static_cast<std::size_t>(n)) {}
  // Throws DomainError on self-parents, out-of-range indices, duplicates or
  // a directed cycle.
  explicit Dag(std::vector<std::vector<int>> parent_sets);

  static Dag from_masks(std::span<const std::uint64_t> parent_masks);

  int size() const { return static_cast<int>(parents_.size()); }
  std::span<const int> parents(int child) const { return parents_.at(static_cast<std::size_t>(child)); }
  const std::vector<std::vector<int>>& parent_sets() const { return parents_; }

  bool has_edge(int from, int to) const;
  std::size_t num_edges() const;
  // Parent sets as bitmasks; requires size() <= 64.
  std::vector<std::uint64_t> parent_masks() const;
  std::vector<int> topological_order() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<std::vector<int>> parents_;
};

// True when the parent masks describe an acyclic graph.
bool masks_acyclic(std::span<const std::uint64_t> parent_masks);

// Deterministic tie-break between equally scored graphs: fewer edges first,
// then the lexicographically smaller parent-mask vector.
bool dag_tie_less(std::span<const std::uint64_t> lhs, std::span<const std::uint64_t> rhs);

}  // namespace ess_sense
