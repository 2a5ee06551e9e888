#include "ess_sense/ess.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "ess_sense/scores.hpp"

namespace ess_sense {

namespace {

struct FamilyExpectations {
  double empirical = 0.0;
  double prior = 0.0;
  double prior_entropy = 0.0;  // sum_{x,pi} q_{x,pi} * -log q(x|pi) = log |X|
  double kl = 0.0;             // sum_{x,pi} q_{x,pi} log(q(x|pi) / p(x|pi))
};

FamilyExpectations family_expectations(const FamilyCounts& fc, Count rows) {
  FamilyExpectations e;
  const auto n = static_cast<double>(rows);
  const auto arity = static_cast<double>(fc.child_arity);
  const double q = 1.0 / (arity * static_cast<double>(fc.parent_state_count));
  const double log_q_cond = -std::log(arity);
  for (std::size_t pi = 0; pi < fc.parent_state_count; ++pi) {
    double guarded_parent = 0.0;
    for (int x = 0; x < fc.child_arity; ++x) {
      guarded_parent += static_cast<double>(std::max<Count>(fc.cell(pi, x), 1));
    }
    for (int x = 0; x < fc.child_arity; ++x) {
      const auto guarded = static_cast<double>(std::max<Count>(fc.cell(pi, x), 1));
      const double log_p = std::log(guarded / guarded_parent);
      e.empirical += guarded / n * log_p;
      e.prior += q * log_p;
      e.kl += q * (log_q_cond - log_p);
    }
  }
  e.prior_entropy = std::log(arity);
  return e;
}

void require_rows(const Dataset& d) {
  if (d.num_rows() == 0) throw EmptyDataError("dataset has no rows");
}

template <typename Fn>
double sum_families(const Dataset& d, const Dag& g, Fn&& pick) {
  require_rows(d);
  if (g.size() != d.num_vars()) throw DomainError("graph and dataset disagree on the node count");
  double total = 0.0;
  const auto rows = static_cast<Count>(d.num_rows());
  for (int i = 0; i < d.num_vars(); ++i) {
    total += pick(family_expectations(family_counts(d, i, g.parents(i)), rows));
  }
  return total;
}

}  // namespace

double expectation_under_empirical(const Dataset& d, const Dag& g) {
  return sum_families(d, g, [](const FamilyExpectations& e) { return e.empirical; });
}

double expectation_under_prior(const Dataset& d, const Dag& g) {
  return sum_families(d, g, [](const FamilyExpectations& e) { return e.prior; });
}

EssEstimate alpha_star(const Dataset& d, const Dag& g, double eps) {
  require_rows(d);
  if (g.size() != d.num_vars()) throw DomainError("graph and dataset disagree on the node count");
  EssEstimate est;
  const auto rows = static_cast<Count>(d.num_rows());
  double prior_entropy = 0.0;
  for (int i = 0; i < d.num_vars(); ++i) {
    const auto fc = family_counts(d, i, g.parents(i));
    const auto e = family_expectations(fc, rows);
    est.expect_empirical += e.empirical;
    est.expect_prior += e.prior;
    est.kl += e.kl;
    prior_entropy += e.prior_entropy;
    est.numerator += family_effective_params(fc);
  }
  est.denom = est.expect_empirical - est.expect_prior;
  // H(q) - H(p) with H(p) = -E_emp.
  est.entropy_gap = prior_entropy + est.expect_empirical;
  if (est.numerator == 0) {
    est.empty_model = true;
    return est;
  }
  if (!(est.denom > eps)) {
    throw DegenerateDenominatorError(
        "empirical distribution is indistinguishable from the uniform prior (denominator " +
        std::to_string(est.denom) + "); the optimal ESS diverges");
  }
  est.alpha_star = static_cast<double>(est.numerator) / est.denom;
  return est;
}

double optimal_alpha_exact(const Dataset& d, const Dag& g, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("bad alpha search interval");
  const auto neg_score = [&](double log_alpha) {
    return -bdeu_graph_score(d, g, BdeuHyper(std::exp(log_alpha))).total;
  };
  const auto [log_alpha, value] =
      boost::math::tools::brent_find_minima(neg_score, std::log(lo), std::log(hi), 40);
  (void)value;
  return std::exp(log_alpha);
}

AscentTrace coordinate_ascent(const Dataset& d, const AscentConfig& config) {
  require_rows(d);
  if (config.max_rounds < 1) throw UsageError("max_rounds must be at least 1");
  AscentTrace trace;

  const auto push_round = [&](int k, Dag dag) {
    EssEstimate est;
    try {
      est = alpha_star(d, dag);
    } catch (const DegenerateDenominatorError& e) {
      throw AscentFailure(e.what(), trace);
    }
    if (est.empty_model) {
      throw AscentFailure("graph has no effective parameters; the optimal ESS is undefined", trace);
    }
    AscentRound round;
    round.k = k;
    round.alpha = est.alpha_star;
    round.score = bdeu_graph_score(d, dag, BdeuHyper(est.alpha_star)).total;
    round.dag = std::move(dag);
    round.estimate = est;
    trace.rounds.push_back(std::move(round));
  };

  push_round(0, bic_init(d, config.search));
  for (int k = 1; k < config.max_rounds; ++k) {
    const double prev = trace.rounds.back().alpha;
    push_round(k, run_search(d, Criterion::bdeu(prev), config.mode, config.search).dag);
    if (std::abs(trace.rounds.back().alpha - prev) < config.conv_tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_alpha = trace.rounds.back().alpha;
  trace.final_dag = trace.rounds.back().dag;
  if (config.exact_step2) trace.exact_step2_alpha = optimal_alpha_exact(d, trace.final_dag);
  return trace;
}

}  // namespace ess_sense
