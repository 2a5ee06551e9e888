#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ess_sense/dag.hpp"
#include "ess_sense/dataset.hpp"

namespace ess_sense {

// BDeu hyperparameters: the equivalent sample size alpha spread uniformly
// over the cells of each family table.
class BdeuHyper {
 public:
  explicit BdeuHyper(double alpha);

  double alpha() const { return alpha_; }
  double alpha_parent(std::size_t parent_states) const {
    return alpha_ / static_cast<double>(parent_states);
  }
  double alpha_cell(int child_arity, std::size_t parent_states) const {
    return alpha_ / (static_cast<double>(child_arity) * static_cast<double>(parent_states));
  }

 private:
  double alpha_;
};

struct ScoreBreakdown {
  double total = 0.0;
  std::vector<double> per_family;
};

// log Gamma(count + a) - log Gamma(a). Throws DomainError unless a > 0.
double log_gamma_ratio(Count count, double a);
// Same for a real-valued count >= 0.
double log_gamma_ratio_real(double count, double a);

double bdeu_family_score(const FamilyCounts& fc, const BdeuHyper& h);
ScoreBreakdown bdeu_graph_score(const Dataset& d, const Dag& g, const BdeuHyper& h);

// Sum over cells of N_{x,pi} log(N_{x,pi} / N_pi), with 0 log 0 = 0.
double family_max_loglik(const FamilyCounts& fc);
// Positive cells minus positive parent states.
Count family_effective_params(const FamilyCounts& fc);
// (|X| - 1) |Pi|, regardless of the data.
Count family_full_params(const FamilyCounts& fc);

// Undivided maximum log-likelihood. Throws EmptyDataError when N = 0.
double max_loglik(const Dataset& d, const Dag& g);
Count effective_params(const Dataset& d, const Dag& g);
double bic_score(const Dataset& d, const Dag& g);
// Log-likelihood minus the parameter count (penalty d, not 2d).
double aic_score(const Dataset& d, const Dag& g);

// Posterior-mean conditional probability table, laid out like fc.cells.
std::vector<double> posterior_mean_params(const FamilyCounts& fc, const BdeuHyper& h);

// Parameter count used by the BIC/AIC penalties: the effective count (empty
// cells discounted) or the textbook sum_i (|X_i| - 1) |Pi_i|.
enum class ParamCount { Effective, Full };

struct Criterion {
  enum class Kind { BDeu, BIC, AIC };
  Kind kind = Kind::BDeu;
  double alpha = 1.0;  // used by BDeu only
  ParamCount params = ParamCount::Effective;

  static Criterion bdeu(double alpha) { return {Kind::BDeu, alpha, ParamCount::Effective}; }
  static Criterion bic(ParamCount pc = ParamCount::Effective) { return {Kind::BIC, 0.0, pc}; }
  static Criterion aic(ParamCount pc = ParamCount::Effective) { return {Kind::AIC, 0.0, pc}; }
};

std::string to_string(Criterion::Kind kind);
Criterion::Kind parse_criterion_kind(const std::string& name);

// Local score of one family under the criterion; `rows` is the sample size N.
double family_score(const FamilyCounts& fc, const Criterion& c, Count rows);
ScoreBreakdown graph_score(const Dataset& d, const Dag& g, const Criterion& c);

}  // namespace ess_sense
