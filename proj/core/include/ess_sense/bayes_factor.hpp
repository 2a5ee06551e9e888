#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ess_sense/dataset.hpp"
#include "ess_sense/scores.hpp"
#include "ess_sense/uniformity.hpp"

namespace ess_sense {

// Log Bayes factor of the graph with edge A <- B (given parents Pi of A)
// against the graph without it, under BDeu. Symmetric in A and B.
double exact_log_bf(const PairCounts& pc, const BdeuHyper& h);

// Same quantity for the expected-count table n * p(a, b, pi); counts need not
// be integers.
double exact_log_bf(const CondJointDist& p, double n, const BdeuHyper& h);

// count log a + count (count - 1) / (2 a): the large-a expansion of
// log Gamma(count + a) - log Gamma(a) truncated after second order.
double gamma_ratio_expansion(Count count, double a_cell);

struct BfResult {
  double exact_log_bf = 0.0;
  std::optional<double> approx_log_bf;
  double n = 0.0;
  double alpha = 0.0;
  // |Pi| (|A| - 1)(|B| - 1), never corrected for empty cells.
  Count d_f = 0;
  double u = 0.0;
};

Count degrees_of_freedom(int a_arity, int b_arity, std::size_t cond_states);

// (N / 2 alpha)(N U - d_F) alongside the exact value. Throws EmptyDataError
// when N = 0.
BfResult approx_log_bf(const PairCounts& pc, const BdeuHyper& h);
BfResult approx_log_bf(const CondJointDist& p, double n, const BdeuHyper& h);

enum class EdgeDecision { EdgeFavored, AbsenceFavored };

std::string to_string(EdgeDecision d);

struct EdgePreference {
  EdgeDecision decision = EdgeDecision::AbsenceFavored;
  double margin = 0.0;  // N U - d_F
};

// Sign of N U - d_F: the preference for every sufficiently large finite
// alpha. A zero margin favours absence.
EdgePreference large_ess_edge_preference(const PairCounts& pc);

struct Fig1Row {
  double z = 0.0;
  double alpha = 0.0;
  double exact = 0.0;
  double approx = 0.0;
};

// Two independent binary variables with p(X = 1) = z and `rows` samples,
// scored for every (z, alpha) in grid order (z outer). With
// `fractional_counts` the expected table rows * p(a) p(b) is used directly;
// otherwise the integer dataset is generated and NonRepresentableError is
// thrown for z values without integral cells.
std::vector<Fig1Row> fig1_curve(Count rows, const std::vector<double>& z_grid,
                                const std::vector<double>& alphas, bool fractional_counts = true);

}  // namespace ess_sense
