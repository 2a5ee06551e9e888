#include "ess_sense/scores.hpp"

#include <cmath>

#include "ess_sense/errors.hpp"

namespace ess_sense {

namespace {

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// log Gamma(x) minus its Stirling leading part; accurate to ~1e-16 for x >= 10.
double stirling_remainder(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 + r2 * (-1.0 / 1680 +
             r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
}

void require_rows(const Dataset& d) {
  if (d.num_rows() == 0) throw EmptyDataError("dataset has no rows");
}

FamilyCounts counts_for(const Dataset& d, const Dag& g, int child) {
  return family_counts(d, child, g.parents(child));
}

void require_matching(const Dataset& d, const Dag& g) {
  if (g.size() != d.num_vars()) throw DomainError("graph and dataset disagree on the node count");
}

}  // namespace

BdeuHyper::BdeuHyper(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("ESS must be positive and finite");
}

double log_gamma_ratio(Count count, double a) {
  if (count < 0) throw DomainError("log_gamma_ratio needs a nonnegative count");
  return log_gamma_ratio_real(static_cast<double>(count), a);
}

double log_gamma_ratio_real(double count, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("log_gamma_ratio needs a > 0");
  if (!(count >= 0.0) || !std::isfinite(count)) throw DomainError("count must be finite and >= 0");
  if (count == 0.0) return 0.0;
  if (count == 1.0) return std::log(a);
  if (a < 10.0) return log_gamma(count + a) - log_gamma(a);
  // Large a: difference of Stirling series, arranged so the leading terms
  // cancel analytically (log1p) instead of numerically.
  const double b = a + count;
  return (a - 0.5) * std::log1p(count / a) + count * std::log(b) - count +
         (stirling_remainder(b) - stirling_remainder(a));
}

double bdeu_family_score(const FamilyCounts& fc, const BdeuHyper& h) {
  const double a_parent = h.alpha_parent(fc.parent_state_count);
  const double a_cell = h.alpha_cell(fc.child_arity, fc.parent_state_count);
  double score = 0.0;
  for (std::size_t pi = 0; pi < fc.parent_state_count; ++pi) {
    if (fc.parent_counts[pi] == 0) continue;
    double term = -log_gamma_ratio(fc.parent_counts[pi], a_parent);
    for (int x = 0; x < fc.child_arity; ++x) term += log_gamma_ratio(fc.cell(pi, x), a_cell);
    score += term;
  }
  return score;
}

ScoreBreakdown bdeu_graph_score(const Dataset& d, const Dag& g, const BdeuHyper& h) {
  return graph_score(d, g, Criterion::bdeu(h.alpha()));
}

double family_max_loglik(const FamilyCounts& fc) {
  double ll = 0.0;
  for (std::size_t pi = 0; pi < fc.parent_state_count; ++pi) {
    const Count np = fc.parent_counts[pi];
    if (np == 0) continue;
    for (int x = 0; x < fc.child_arity; ++x) {
      const Count c = fc.cell(pi, x);
      if (c == 0) continue;
      ll += static_cast<double>(c) * std::log(static_cast<double>(c) / static_cast<double>(np));
    }
  }
  return ll;
}

Count family_effective_params(const FamilyCounts& fc) {
  Count d = 0;
  for (std::size_t pi = 0; pi < fc.parent_state_count; ++pi) {
    if (fc.parent_counts[pi] == 0) continue;
    --d;
    for (int x = 0; x < fc.child_arity; ++x) d += fc.cell(pi, x) > 0 ? 1 : 0;
  }
  return d;
}

Count family_full_params(const FamilyCounts& fc) {
  return static_cast<Count>(fc.child_arity - 1) * static_cast<Count>(fc.parent_state_count);
}

double max_loglik(const Dataset& d, const Dag& g) {
  require_rows(d);
  require_matching(d, g);
  double ll = 0.0;
  for (int i = 0; i < d.num_vars(); ++i) ll += family_max_loglik(counts_for(d, g, i));
  return ll;
}

Count effective_params(const Dataset& d, const Dag& g) {
  require_matching(d, g);
  Count total = 0;
  for (int i = 0; i < d.num_vars(); ++i) total += family_effective_params(counts_for(d, g, i));
  return total;
}

double bic_score(const Dataset& d, const Dag& g) { return graph_score(d, g, Criterion::bic()).total; }

double aic_score(const Dataset& d, const Dag& g) { return graph_score(d, g, Criterion::aic()).total; }

std::vector<double> posterior_mean_params(const FamilyCounts& fc, const BdeuHyper& h) {
  const double a_parent = h.alpha_parent(fc.parent_state_count);
  const double a_cell = h.alpha_cell(fc.child_arity, fc.parent_state_count);
  std::vector<double> theta(fc.cells.size());
  for (std::size_t pi = 0; pi < fc.parent_state_count; ++pi) {
    const double denom = static_cast<double>(fc.parent_counts[pi]) + a_parent;
    for (int x = 0; x < fc.child_arity; ++x) {
      theta[pi * static_cast<std::size_t>(fc.child_arity) + static_cast<std::size_t>(x)] =
          (static_cast<double>(fc.cell(pi, x)) + a_cell) / denom;
    }
  }
  return theta;
}

std::string to_string(Criterion::Kind kind) {
  switch (kind) {
    case Criterion::Kind::BDeu: return "bdeu";
    case Criterion::Kind::BIC: return "bic";
    case Criterion::Kind::AIC: return "aic";
  }
  return "?";
}

Criterion::Kind parse_criterion_kind(const std::string& name) {
  if (name == "bdeu") return Criterion::Kind::BDeu;
  if (name == "bic") return Criterion::Kind::BIC;
  if (name == "aic") return Criterion::Kind::AIC;
  throw UsageError("unknown criterion '" + name + "' (expected bdeu, bic or aic)");
}

double family_score(const FamilyCounts& fc, const Criterion& c, Count rows) {
  const auto params = [&] {
    return static_cast<double>(c.params == ParamCount::Full ? family_full_params(fc)
                                                            : family_effective_params(fc));
  };
  switch (c.kind) {
    case Criterion::Kind::BDeu:
      return bdeu_family_score(fc, BdeuHyper(c.alpha));
    case Criterion::Kind::BIC:
      if (rows <= 0) throw EmptyDataError("BIC needs at least one row");
      return family_max_loglik(fc) - 0.5 * params() * std::log(static_cast<double>(rows));
    case Criterion::Kind::AIC:
      if (rows <= 0) throw EmptyDataError("AIC needs at least one row");
      return family_max_loglik(fc) - params();
  }
  return 0.0;
}

ScoreBreakdown graph_score(const Dataset& d, const Dag& g, const Criterion& c) {
  require_matching(d, g);
  if (c.kind != Criterion::Kind::BDeu) require_rows(d);
  ScoreBreakdown out;
  out.per_family.reserve(static_cast<std::size_t>(d.num_vars()));
  const auto rows = static_cast<Count>(d.num_rows());
  for (int i = 0; i < d.num_vars(); ++i) {
    out.per_family.push_back(family_score(counts_for(d, g, i), c, rows));
  }
  for (double s : out.per_family) out.total += s;
  return out;
}

}  // namespace ess_sense
