#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ess_sense {

using Count = std::int64_t;

inline constexpr std::size_t kDefaultMaxCells = 10'000'000;

struct Variable {
  std::string name;
  std::vector<std::string> states;  // state index -> token

  int arity() const { return static_cast<int>(states.size()); }
};

// Complete categorical data, stored row-major. Immutable after construction.
class Dataset {
 public:
  Dataset() = default;

  // `cells` holds num_rows * variables.size() state indices, row-major.
  Dataset(std::vector<Variable> variables, std::vector<std::uint16_t> cells);

  static Dataset from_rows(std::vector<Variable> variables,
                           const std::vector<std::vector<int>>& rows);

  // Variables named by `names`, each with states "0".."arity-1".
  static Dataset from_rows(const std::vector<std::string>& names,
                           const std::vector<int>& arities,
                           const std::vector<std::vector<int>>& rows);

  int num_vars() const { return static_cast<int>(variables_.size()); }
  std::size_t num_rows() const { return num_rows_; }

  const Variable& variable(int i) const { return variables_.at(static_cast<std::size_t>(i)); }
  std::span<const Variable> variables() const { return variables_; }
  int arity(int i) const { return variable(i).arity(); }
  std::vector<int> arities() const;

  int value(std::size_t row, int var) const {
    return cells_[row * variables_.size() + static_cast<std::size_t>(var)];
  }
  std::span<const std::uint16_t> row(std::size_t r) const {
    return {cells_.data() + r * variables_.size(), variables_.size()};
  }

  // Throws UsageError when no variable has that name.
  int index_of(std::string_view name) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::uint16_t> cells_;
  std::size_t num_rows_ = 0;
};

// Header row of variable names, then one comma-separated token per column.
// Tokens map to state indices in order of first appearance.
Dataset load_csv(std::istream& in);
Dataset load_csv_file(const std::string& path);  // "-" reads stdin
void write_csv(std::ostream& out, const Dataset& d);

// Contingency table N_{x,pi} of one child given an ordered parent list. The
// joint parent state is mixed-radix over `parents` with the last-listed
// parent varying fastest.
struct FamilyCounts {
  int child = 0;
  std::vector<int> parents;
  int child_arity = 0;
  std::size_t parent_state_count = 1;
  std::vector<Count> cells;          // [parent_state * child_arity + child_state]
  std::vector<Count> parent_counts;  // [parent_state]

  Count cell(std::size_t parent_state, int child_state) const {
    return cells[parent_state * static_cast<std::size_t>(child_arity) +
                 static_cast<std::size_t>(child_state)];
  }
  Count total() const;
};

// Joint counts N_{a,b,pi} for an edge test between a and b given `cond`.
struct PairCounts {
  int a_var = 0;
  int b_var = 0;
  std::vector<int> cond;
  int a_arity = 0;
  int b_arity = 0;
  std::size_t cond_state_count = 1;
  std::vector<Count> counts;       // [(pi * a_arity + a) * b_arity + b]
  std::vector<Count> a_marginal;   // [pi * a_arity + a]
  std::vector<Count> b_marginal;   // [pi * b_arity + b]
  std::vector<Count> cond_marginal;  // [pi]
  Count n = 0;

  Count count(std::size_t pi, int a, int b) const {
    return counts[(pi * static_cast<std::size_t>(a_arity) + static_cast<std::size_t>(a)) *
                      static_cast<std::size_t>(b_arity) +
                  static_cast<std::size_t>(b)];
  }
};

// Mixed-radix joint state of `vars` in row `r` (last variable fastest).
std::size_t joint_state(const Dataset& d, std::size_t r, std::span<const int> vars);
// Product of arities; throws TableTooLargeError past `max_cells`.
std::size_t joint_state_count(const Dataset& d, std::span<const int> vars,
                              std::size_t max_cells = kDefaultMaxCells);

FamilyCounts family_counts(const Dataset& d, int child, std::span<const int> parents,
                           std::size_t max_cells = kDefaultMaxCells);

PairCounts pair_counts(const Dataset& d, int a, int b, std::span<const int> cond,
                       std::size_t max_cells = kDefaultMaxCells);

// Row and column transforms used by invariance checks and the synthetic
// generators.
Dataset replicate_rows(const Dataset& d, int copies);
Dataset permute_rows(const Dataset& d, std::span<const std::size_t> order);
Dataset concat_columns(const Dataset& left, const Dataset& right);
Dataset select_columns(const Dataset& d, std::span<const int> columns);

}  // namespace ess_sense
