#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ess_sense/dag.hpp"
#include "ess_sense/dataset.hpp"
#include "ess_sense/scores.hpp"

namespace ess_sense {

inline constexpr int kExactDpMaxVars = 20;
inline constexpr int kBruteForceDefaultLimit = 4;
inline constexpr double kMoveEpsilon = 1e-12;

// Unlimited (n - 1) for n <= 10, 5 for n <= 15, 3 above.
int default_max_indegree(int n_vars);

// Worker count: ESS_SENSE_THREADS when set and positive, else the hardware
// concurrency.
int default_thread_count();

struct SearchOptions {
  int max_indegree = -1;  // negative: default_max_indegree
  std::size_t max_cells = kDefaultMaxCells;
  int threads = 0;  // 0: default_thread_count
};

// Local scores of every admissible (child, parent set) pair.
class ParentSetCache {
 public:
  int num_vars() const { return n_; }
  int max_indegree() const { return max_indegree_; }
  const Criterion& criterion() const { return criterion_; }

  // Score of `parent_mask` as parents of `child`; empty when the set exceeds
  // the indegree cap or was omitted for table size.
  std::optional<double> score(int child, std::uint64_t parent_mask) const;

  std::size_t entries() const { return entries_; }
  std::size_t omitted() const { return omitted_; }

  // Index of `parent_mask` in the per-child table (the child's bit removed).
  static std::size_t compress(std::uint64_t parent_mask, int child);
  static std::uint64_t expand(std::size_t index, int child);

 private:
  friend ParentSetCache build_cache(const Dataset&, const Criterion&, const SearchOptions&);

  int n_ = 0;
  int max_indegree_ = 0;
  Criterion criterion_;
  std::vector<std::vector<double>> table_;  // NaN marks inadmissible
  std::size_t entries_ = 0;
  std::size_t omitted_ = 0;
};

// Throws SizeError beyond kExactDpMaxVars variables.
ParentSetCache build_cache(const Dataset& d, const Criterion& c, const SearchOptions& opts = {});

enum class SearchMethod { BruteForce, ExactDP, HillClimb };
std::string to_string(SearchMethod m);

struct SearchStats {
  std::size_t candidates = 0;  // DAGs, parent sets or moves examined
  std::size_t omitted = 0;     // parent sets dropped by the table cap
  std::size_t iterations = 0;
  double runtime_ms = 0.0;
};

struct SearchResult {
  Dag dag;
  double score = 0.0;
  SearchMethod method = SearchMethod::ExactDP;
  SearchStats stats;
  std::vector<double> trace;  // hill climbing: score after each accepted move
};

// Enumerates every labelled DAG. Ties: fewer edges, then the smaller
// parent-mask vector. Throws SizeError when d.num_vars() > n_limit.
SearchResult brute_force_map(const Dataset& d, const Criterion& c,
                             int n_limit = kBruteForceDefaultLimit);

// Globally optimal DAG under the cache's indegree cap, via best parent sets
// within every subset and the best-sink recursion over node subsets.
SearchResult exact_dp_map(const ParentSetCache& cache);

// Best single edge addition, deletion or reversal until none improves the
// score by more than kMoveEpsilon. Ties go to the lowest (child, parent).
SearchResult hill_climb(const Dataset& d, const Criterion& c, const Dag& init,
                        const SearchOptions& opts = {});

// Exact DP when n <= 15, else hill climbing from the empty graph.
SearchResult map_search(const Dataset& d, const Criterion& c, const SearchOptions& opts = {});

// BIC-optimal starting graph for the ESS ascent, penalized by the full
// parameter count. With the effective count, a family whose parents
// determine the child costs nothing, and such saturated families leave the
// ESS estimate without a usable denominator.
Dag bic_init(const Dataset& d, const SearchOptions& opts = {});

// Sum of fresh family scores in node order.
double score_dag(const Dataset& d, const Dag& g, const Criterion& c);

struct SweepRow {
  double alpha = 0.0;
  std::optional<std::size_t> edges;
  std::optional<double> score;
  std::string error;  // set when the search failed for this row
};

// Log-spaced (or linear) alpha grid, endpoints included.
std::vector<double> alpha_grid(double lo, double hi, int points, bool log_spaced);

enum class SearchMode { Auto, Exact, Greedy };

std::vector<SweepRow> ess_sweep(const Dataset& d, const std::vector<double>& alphas,
                                SearchMode mode = SearchMode::Auto, const SearchOptions& opts = {});

SearchResult run_search(const Dataset& d, const Criterion& c, SearchMode mode,
                        const SearchOptions& opts = {});

}  // namespace ess_sense
