#pragma once

#include <optional>
#include <vector>

#include "ess_sense/dag.hpp"
#include "ess_sense/dataset.hpp"
#include "ess_sense/errors.hpp"
#include "ess_sense/search.hpp"

namespace ess_sense {

inline constexpr double kDenominatorEpsilon = 1e-9;

// Empirical expectation of the log of the graph-factored ML distribution,
//   sum_i sum_{x,pi} (N+_{x,pi} / N) log(N+_{x,pi} / N+_pi),
// where N+_{x,pi} = max(N_{x,pi}, 1) in every cell and N+_pi is the sum of
// the guarded cells. Throws EmptyDataError when N = 0.
double expectation_under_empirical(const Dataset& d, const Dag& g);

// Same log-probabilities weighted by the uniform BDeu prior
// q_{x,pi} = 1 / (|X_i| |Pi_i|), family by family.
double expectation_under_prior(const Dataset& d, const Dag& g);

struct EssEstimate {
  double alpha_star = 0.0;
  Count numerator = 0;  // effective number of parameters
  double denom = 0.0;   // expectation_under_empirical - expectation_under_prior
  double expect_empirical = 0.0;
  double expect_prior = 0.0;
  // denom == entropy_gap + kl, with the entropies and the divergence taken
  // over the graph-factored conditionals.
  double entropy_gap = 0.0;
  double kl = 0.0;
  bool empty_model = false;  // numerator 0; alpha_star reported as 0
};

// effective_params / (E_emp - E_prior). Throws DegenerateDenominatorError
// when the denominator is <= eps while the numerator is positive.
EssEstimate alpha_star(const Dataset& d, const Dag& g, double eps = kDenominatorEpsilon);

// Maximizer of the BDeu log marginal likelihood over alpha in [lo, hi]
// (Brent search on log alpha), for comparing against alpha_star.
double optimal_alpha_exact(const Dataset& d, const Dag& g, double lo = 1e-2, double hi = 1e6);

struct AscentConfig {
  int max_rounds = 20;
  double conv_tol = 0.1;
  SearchMode mode = SearchMode::Auto;
  SearchOptions search;
  bool exact_step2 = false;
};

struct AscentRound {
  int k = 0;
  double alpha = 0.0;  // alpha_k = alpha_star(G_k)
  Dag dag;             // G_0 from BIC, else the MAP graph at alpha_{k-1}
  double score = 0.0;  // BDeu score of G_k at alpha_k
  EssEstimate estimate;
};

struct AscentTrace {
  std::vector<AscentRound> rounds;
  bool converged = false;
  double final_alpha = 0.0;
  Dag final_dag;
  std::optional<double> exact_step2_alpha;  // set when AscentConfig::exact_step2
};

// Thrown when an alpha update hits a degenerate denominator; carries the
// rounds completed so far.
class AscentFailure : public DegenerateDenominatorError {
 public:
  AscentFailure(const std::string& what, AscentTrace partial)
      : DegenerateDenominatorError(what), trace_(std::move(partial)) {}
  const AscentTrace& trace() const { return trace_; }

 private:
  AscentTrace trace_;
};

// Round 0: G_0 = bic_init, alpha_0 = alpha_star(G_0). Round k >= 1:
// G_k = MAP graph at alpha_{k-1}, alpha_k = alpha_star(G_k). Stops when
// |alpha_k - alpha_{k-1}| < conv_tol or after max_rounds rounds.
AscentTrace coordinate_ascent(const Dataset& d, const AscentConfig& config = {});

}  // namespace ess_sense
