#include "ess_sense/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_map>

#include "ess_sense/errors.hpp"

namespace ess_sense {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  for (; mask != 0; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

int resolve_indegree(const SearchOptions& opts, int n) {
  const int k = opts.max_indegree < 0 ? default_max_indegree(n) : opts.max_indegree;
  return std::min(k, std::max(n - 1, 0));
}

// Strictly better, or tied within rounding and preferred by the tie-break.
bool better_graph(double score, std::span<const std::uint64_t> masks, double best_score,
                  std::span<const std::uint64_t> best_masks) {
  const double tol = 1e-12 * std::max(1.0, std::abs(best_score));
  if (score > best_score + tol) return true;
  if (score < best_score - tol) return false;
  return dag_tie_less(masks, best_masks);
}

// Fewer parents, then the smaller mask.
bool prefer_parent_set(std::uint64_t lhs, std::uint64_t rhs) {
  const int pl = std::popcount(lhs);
  const int pr = std::popcount(rhs);
  return pl != pr ? pl < pr : lhs < rhs;
}

}  // namespace

int default_max_indegree(int n_vars) {
  if (n_vars <= 10) return std::max(n_vars - 1, 0);
  if (n_vars <= 15) return 5;
  return 3;
}

int default_thread_count() {
  if (const char* env = std::getenv("ESS_SENSE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::size_t ParentSetCache::compress(std::uint64_t parent_mask, int child) {
  const std::uint64_t low = parent_mask & ((std::uint64_t{1} << child) - 1);
  const std::uint64_t high = parent_mask >> (child + 1);
  return static_cast<std::size_t>(low | (high << child));
}

std::uint64_t ParentSetCache::expand(std::size_t index, int child) {
  const auto idx = static_cast<std::uint64_t>(index);
  const std::uint64_t low = idx & ((std::uint64_t{1} << child) - 1);
  const std::uint64_t high = idx >> child;
  return low | (high << (child + 1));
}

std::optional<double> ParentSetCache::score(int child, std::uint64_t parent_mask) const {
  if (child < 0 || child >= n_ || (parent_mask >> child) & 1U) return std::nullopt;
  if (parent_mask >> n_) return std::nullopt;
  const double v = table_[static_cast<std::size_t>(child)][compress(parent_mask, child)];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

ParentSetCache build_cache(const Dataset& d, const Criterion& c, const SearchOptions& opts) {
  const int n = d.num_vars();
  if (n > kExactDpMaxVars) {
    throw SizeError("parent-set cache supports at most " + std::to_string(kExactDpMaxVars) +
                    " variables");
  }
  ParentSetCache cache;
  cache.n_ = n;
  cache.max_indegree_ = resolve_indegree(opts, n);
  cache.criterion_ = c;
  cache.table_.resize(static_cast<std::size_t>(n));
  const std::size_t width = n > 0 ? std::size_t{1} << (n - 1) : 0;
  const auto rows = static_cast<Count>(d.num_rows());

  std::vector<std::size_t> omitted(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> entries(static_cast<std::size_t>(n), 0);
  // Each child owns its table slot, so results do not depend on scheduling.
  const auto fill_child = [&](int child) {
    auto& table = cache.table_[static_cast<std::size_t>(child)];
    table.assign(width, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t idx = 0; idx < width; ++idx) {
      const std::uint64_t mask = ParentSetCache::expand(idx, child);
      if (std::popcount(mask) > cache.max_indegree_) continue;
      const auto parents = mask_members(mask);
      try {
        table[idx] = family_score(family_counts(d, child, parents, opts.max_cells), c, rows);
        ++entries[static_cast<std::size_t>(child)];
      } catch (const TableTooLargeError&) {
        ++omitted[static_cast<std::size_t>(child)];
      }
    }
  };

  const int threads = std::min(opts.threads > 0 ? opts.threads : default_thread_count(), n);
  if (threads <= 1) {
    for (int child = 0; child < n; ++child) fill_child(child);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int child = t; child < n; child += threads) fill_child(child);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < n; ++i) {
    cache.entries_ += entries[static_cast<std::size_t>(i)];
    cache.omitted_ += omitted[static_cast<std::size_t>(i)];
  }
  return cache;
}

std::string to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::BruteForce: return "BruteForce";
    case SearchMethod::ExactDP: return "ExactDP";
    case SearchMethod::HillClimb: return "HillClimb";
  }
  return "?";
}

double score_dag(const Dataset& d, const Dag& g, const Criterion& c) {
  return graph_score(d, g, c).total;
}

SearchResult brute_force_map(const Dataset& d, const Criterion& c, int n_limit) {
  const auto start = Clock::now();
  const int n = d.num_vars();
  if (n > n_limit) {
    throw SizeError("brute force is limited to " + std::to_string(n_limit) + " variables");
  }
  if (n > 6) throw SizeError("brute force enumeration beyond 6 variables is not supported");
  const std::size_t width = n > 0 ? std::size_t{1} << (n - 1) : 1;
  const auto rows = static_cast<Count>(d.num_rows());

  // Fresh local scores for every (child, parent set).
  std::vector<std::vector<double>> local(static_cast<std::size_t>(n), std::vector<double>(width));
  for (int child = 0; child < n; ++child) {
    for (std::size_t idx = 0; idx < width; ++idx) {
      const auto parents = mask_members(ParentSetCache::expand(idx, child));
      local[static_cast<std::size_t>(child)][idx] =
          family_score(family_counts(d, child, parents), c, rows);
    }
  }

  SearchResult best;
  best.method = SearchMethod::BruteForce;
  best.score = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> best_masks(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= width;
  for (std::size_t combo = 0; combo < total; ++combo) {
    std::size_t rest = combo;
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = rest % width;
      rest /= width;
      masks[static_cast<std::size_t>(i)] = ParentSetCache::expand(digits[static_cast<std::size_t>(i)], i);
    }
    if (!masks_acyclic(masks)) continue;
    ++best.stats.candidates;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += local[static_cast<std::size_t>(i)][digits[static_cast<std::size_t>(i)]];
    if (best.stats.candidates == 1 || better_graph(s, masks, best.score, best_masks)) {
      best.score = s;
      best_masks = masks;
    }
  }
  best.dag = Dag::from_masks(best_masks);
  best.score = score_dag(d, best.dag, c);
  best.stats.runtime_ms = elapsed_ms(start);
  return best;
}

SearchResult exact_dp_map(const ParentSetCache& cache) {
  const auto start = Clock::now();
  const int n = cache.num_vars();
  if (n > kExactDpMaxVars) throw SizeError("exact search supports at most 20 variables");
  SearchResult result;
  result.method = SearchMethod::ExactDP;
  if (n == 0) return result;
  const std::size_t width = std::size_t{1} << (n - 1);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  // best_score[i][W]: best local score of i over parent sets contained in W.
  std::vector<std::vector<double>> best_score(static_cast<std::size_t>(n));
  std::vector<std::vector<std::uint32_t>> best_set(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& bs = best_score[static_cast<std::size_t>(i)];
    auto& bm = best_set[static_cast<std::size_t>(i)];
    bs.assign(width, kNegInf);
    bm.assign(width, 0);
    for (std::size_t w = 0; w < width; ++w) {
      const std::uint64_t mask = ParentSetCache::expand(w, i);
      if (auto s = cache.score(i, mask)) {
        bs[w] = *s;
        bm[w] = static_cast<std::uint32_t>(w);
        ++result.stats.candidates;
      }
      for (std::size_t rest = w; rest != 0; rest &= rest - 1) {
        const std::size_t sub = w & ~(rest & (~rest + 1));
        const double cand = bs[sub];
        if (cand == kNegInf) continue;
        const bool take = cand > bs[w] || (cand == bs[w] && prefer_parent_set(
                                               ParentSetCache::expand(bm[sub], i),
                                               ParentSetCache::expand(bm[w], i)));
        if (take) {
          bs[w] = cand;
          bm[w] = bm[sub];
        }
      }
    }
  }

  // Best network over each node subset, choosing its sink.
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> net(subsets, kNegInf);
  std::vector<std::int8_t> sink(subsets, -1);
  net[0] = 0.0;
  for (std::size_t s = 1; s < subsets; ++s) {
    for (std::size_t rest = s; rest != 0; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const std::size_t without = s & ~(std::size_t{1} << v);
      const double local =
          best_score[static_cast<std::size_t>(v)][ParentSetCache::compress(without, v)];
      const double cand = net[without] + local;
      if (cand > net[s]) {
        net[s] = cand;
        sink[s] = static_cast<std::int8_t>(v);
      }
    }
  }

  std::vector<std::uint64_t> masks(static_cast<std::size_t>(n), 0);
  for (std::size_t s = subsets - 1; s != 0;) {
    const int v = sink[s];
    const std::size_t without = s & ~(std::size_t{1} << v);
    masks[static_cast<std::size_t>(v)] = ParentSetCache::expand(
        best_set[static_cast<std::size_t>(v)][ParentSetCache::compress(without, v)], v);
    s = without;
  }
  result.dag = Dag::from_masks(masks);
  result.score = 0.0;
  for (int i = 0; i < n; ++i) {
    result.score += *cache.score(i, masks[static_cast<std::size_t>(i)]);
  }
  result.stats.omitted = cache.omitted();
  result.stats.runtime_ms = elapsed_ms(start);
  return result;
}

namespace {

class LocalScorer {
 public:
  LocalScorer(const Dataset& d, const Criterion& c, std::size_t max_cells)
      : d_(d), c_(c), max_cells_(max_cells), memo_(static_cast<std::size_t>(d.num_vars())) {}

  // Empty when the family table exceeds the cap.
  std::optional<double> operator()(int child, std::uint64_t mask) {
    auto& m = memo_[static_cast<std::size_t>(child)];
    if (auto it = m.find(mask); it != m.end()) return it->second;
    std::optional<double> v;
    try {
      v = family_score(family_counts(d_, child, mask_members(mask), max_cells_), c_,
                       static_cast<Count>(d_.num_rows()));
    } catch (const TableTooLargeError&) {
    }
    m.emplace(mask, v);
    return v;
  }

 private:
  const Dataset& d_;
  Criterion c_;
  std::size_t max_cells_;
  std::vector<std::unordered_map<std::uint64_t, std::optional<double>>> memo_;
};

// True when `target` is reachable from `from` along parent -> child edges.
bool reachable(std::span<const std::uint64_t> masks, int from, int target) {
  const int n = static_cast<int>(masks.size());
  std::uint64_t seen = std::uint64_t{1} << from;
  std::vector<int> stack{from};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == target) return true;
    for (int c = 0; c < n; ++c) {
      const std::uint64_t bit = std::uint64_t{1} << c;
      if ((masks[static_cast<std::size_t>(c)] >> u) & 1U && !(seen & bit)) {
        seen |= bit;
        stack.push_back(c);
      }
    }
  }
  return false;
}

}  // namespace

SearchResult hill_climb(const Dataset& d, const Criterion& c, const Dag& init,
                        const SearchOptions& opts) {
  const auto start = Clock::now();
  const int n = d.num_vars();
  if (init.size() != n) throw DomainError("initial graph and dataset disagree on the node count");
  if (n > 64) throw SizeError("hill climbing supports at most 64 variables");
  const int max_in = resolve_indegree(opts, n);
  LocalScorer local(d, c, opts.max_cells);
  auto masks = init.parent_masks();
  std::vector<double> family(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto s = local(i, masks[static_cast<std::size_t>(i)]);
    if (!s) throw TableTooLargeError("initial graph has a family beyond the table cap");
    family[static_cast<std::size_t>(i)] = *s;
  }

  SearchResult result;
  result.method = SearchMethod::HillClimb;
  while (true) {
    enum class Move { None, Add, Remove, Reverse };
    Move best_move = Move::None;
    double best_delta = kMoveEpsilon;
    int best_child = -1;
    int best_parent = -1;
    double new_child_score = 0.0;
    double new_parent_score = 0.0;
    for (int child = 0; child < n; ++child) {
      const std::uint64_t cm = masks[static_cast<std::size_t>(child)];
      for (int parent = 0; parent < n; ++parent) {
        if (parent == child) continue;
        const std::uint64_t bit = std::uint64_t{1} << parent;
        const double old_child = family[static_cast<std::size_t>(child)];
        if (!(cm & bit)) {
          if (std::popcount(cm) >= max_in || reachable(masks, child, parent)) continue;
          ++result.stats.candidates;
          auto s = local(child, cm | bit);
          if (s && *s - old_child > best_delta) {
            best_delta = *s - old_child;
            best_move = Move::Add;
            best_child = child;
            best_parent = parent;
            new_child_score = *s;
          }
          continue;
        }
        ++result.stats.candidates;
        auto removed = local(child, cm & ~bit);
        if (removed && *removed - old_child > best_delta) {
          best_delta = *removed - old_child;
          best_move = Move::Remove;
          best_child = child;
          best_parent = parent;
          new_child_score = *removed;
        }
        // Reverse parent -> child into child -> parent.
        const std::uint64_t pm = masks[static_cast<std::size_t>(parent)];
        if (!removed || std::popcount(pm) >= max_in) continue;
        auto trial = masks;
        trial[static_cast<std::size_t>(child)] &= ~bit;
        if (reachable(trial, parent, child)) continue;
        ++result.stats.candidates;
        auto rev = local(parent, pm | (std::uint64_t{1} << child));
        if (!rev) continue;
        const double delta = (*removed - old_child) + (*rev - family[static_cast<std::size_t>(parent)]);
        if (delta > best_delta) {
          best_delta = delta;
          best_move = Move::Reverse;
          best_child = child;
          best_parent = parent;
          new_child_score = *removed;
          new_parent_score = *rev;
        }
      }
    }
    if (best_move == Move::None) break;
    const std::uint64_t bit = std::uint64_t{1} << best_parent;
    auto& cm = masks[static_cast<std::size_t>(best_child)];
    switch (best_move) {
      case Move::Add: cm |= bit; break;
      case Move::Remove: cm &= ~bit; break;
      case Move::Reverse:
        cm &= ~bit;
        masks[static_cast<std::size_t>(best_parent)] |= std::uint64_t{1} << best_child;
        family[static_cast<std::size_t>(best_parent)] = new_parent_score;
        break;
      case Move::None: break;
    }
    family[static_cast<std::size_t>(best_child)] = new_child_score;
    ++result.stats.iterations;
    double total = 0.0;
    for (double f : family) total += f;
    result.trace.push_back(total);
  }
  result.dag = Dag::from_masks(masks);
  result.score = 0.0;
  for (double f : family) result.score += f;
  result.stats.runtime_ms = elapsed_ms(start);
  return result;
}

SearchResult map_search(const Dataset& d, const Criterion& c, const SearchOptions& opts) {
  return run_search(d, c, SearchMode::Auto, opts);
}

SearchResult run_search(const Dataset& d, const Criterion& c, SearchMode mode,
                        const SearchOptions& opts) {
  const bool exact = mode == SearchMode::Exact || (mode == SearchMode::Auto && d.num_vars() <= 15);
  if (exact) {
    const auto start = Clock::now();
    auto result = exact_dp_map(build_cache(d, c, opts));
    result.stats.runtime_ms = elapsed_ms(start);
    return result;
  }
  return hill_climb(d, c, Dag(d.num_vars()), opts);
}

Dag bic_init(const Dataset& d, const SearchOptions& opts) {
  return map_search(d, Criterion::bic(ParamCount::Full), opts).dag;
}

std::vector<double> alpha_grid(double lo, double hi, int points, bool log_spaced) {
  if (points < 1) throw UsageError("grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) throw UsageError("grid bounds must satisfy 0 < lo <= hi");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  for (int k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / (points - 1);
    // Powers of ten keep decade points exact (10^2 is 100, not 99.99...).
    out.push_back(log_spaced ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)))
                             : lo + t * (hi - lo));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<SweepRow> ess_sweep(const Dataset& d, const std::vector<double>& alphas,
                                SearchMode mode, const SearchOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    try {
      const auto r = run_search(d, Criterion::bdeu(alpha), mode, opts);
      row.edges = r.dag.num_edges();
      row.score = r.score;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ess_sense
