#include "ess_sense/bayes_factor.hpp"

#include <algorithm>
#include <cmath>

#include "ess_sense/errors.hpp"
#include "ess_sense/synthetic.hpp"

namespace ess_sense {

namespace {

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Real-valued count table with the layout of PairCounts.
struct PairTable {
  int a_arity;
  int b_arity;
  std::size_t cond_states;
  std::vector<double> counts;

  double count(std::size_t pi, int a, int b) const {
    return counts[(pi * static_cast<std::size_t>(a_arity) + static_cast<std::size_t>(a)) *
                      static_cast<std::size_t>(b_arity) +
                  static_cast<std::size_t>(b)];
  }
};

PairTable table_of(const PairCounts& pc) {
  PairTable t{pc.a_arity, pc.b_arity, pc.cond_state_count, {}};
  t.counts.assign(pc.counts.begin(), pc.counts.end());
  return t;
}

PairTable table_of(const CondJointDist& p, double n) {
  PairTable t{p.a_arity(), p.b_arity(), p.cond_states(), p.probs()};
  for (double& c : t.counts) c *= n;
  return t;
}

// Each group is summed with an order-independent sum, and the two marginal
// groups are combined commutatively, so swapping A and B is exact.
double exact_log_bf_table(const PairTable& t, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("ESS must be positive and finite");
  const auto A = static_cast<double>(t.a_arity);
  const auto B = static_cast<double>(t.b_arity);
  const auto P = static_cast<double>(t.cond_states);
  const double a_ab = alpha / ((A * B) * P);
  const double a_a = alpha / (A * P);
  const double a_b = alpha / (B * P);
  const double a_pi = alpha / P;

  std::vector<double> ab_terms;
  double s_a = 0.0;
  double s_b = 0.0;
  double s_pi = 0.0;
  for (std::size_t pi = 0; pi < t.cond_states; ++pi) {
    std::vector<double> cells;
    for (int a = 0; a < t.a_arity; ++a) {
      double na = 0.0;
      for (int b = 0; b < t.b_arity; ++b) {
        const double c = t.count(pi, a, b);
        na += c;
        cells.push_back(c);
        ab_terms.push_back(log_gamma_ratio_real(c, a_ab));
      }
      s_a += log_gamma_ratio_real(na, a_a);
    }
    for (int b = 0; b < t.b_arity; ++b) {
      double nb = 0.0;
      for (int a = 0; a < t.a_arity; ++a) nb += t.count(pi, a, b);
      s_b += log_gamma_ratio_real(nb, a_b);
    }
    s_pi += log_gamma_ratio_real(sorted_sum(std::move(cells)), a_pi);
  }
  return sorted_sum(std::move(ab_terms)) - (s_a + s_b) + s_pi;
}

}  // namespace

double exact_log_bf(const PairCounts& pc, const BdeuHyper& h) {
  return exact_log_bf_table(table_of(pc), h.alpha());
}

double exact_log_bf(const CondJointDist& p, double n, const BdeuHyper& h) {
  if (!(n >= 0.0)) throw DomainError("sample size must be nonnegative");
  return exact_log_bf_table(table_of(p, n), h.alpha());
}

double gamma_ratio_expansion(Count count, double a_cell) {
  if (!(a_cell > 0.0)) throw DomainError("gamma_ratio_expansion needs a > 0");
  if (count == 0) return 0.0;
  const auto c = static_cast<double>(count);
  return c * std::log(a_cell) + c * (c - 1.0) / (2.0 * a_cell);
}

Count degrees_of_freedom(int a_arity, int b_arity, std::size_t cond_states) {
  return static_cast<Count>(cond_states) * (a_arity - 1) * (b_arity - 1);
}

BfResult approx_log_bf(const PairCounts& pc, const BdeuHyper& h) {
  if (pc.n <= 0) throw EmptyDataError("Bayes factor approximation needs at least one row");
  BfResult r;
  r.n = static_cast<double>(pc.n);
  r.alpha = h.alpha();
  r.d_f = degrees_of_freedom(pc.a_arity, pc.b_arity, pc.cond_state_count);
  r.u = uniformity_from_counts(pc).u;
  r.exact_log_bf = exact_log_bf(pc, h);
  r.approx_log_bf = r.n / (2.0 * r.alpha) * (r.n * r.u - static_cast<double>(r.d_f));
  return r;
}

BfResult approx_log_bf(const CondJointDist& p, double n, const BdeuHyper& h) {
  if (!(n > 0.0)) throw EmptyDataError("Bayes factor approximation needs a positive sample size");
  BfResult r;
  r.n = n;
  r.alpha = h.alpha();
  r.d_f = degrees_of_freedom(p.a_arity(), p.b_arity(), p.cond_states());
  r.u = uniformity(p).u;
  r.exact_log_bf = exact_log_bf(p, n, h);
  r.approx_log_bf = r.n / (2.0 * r.alpha) * (r.n * r.u - static_cast<double>(r.d_f));
  return r;
}

std::string to_string(EdgeDecision d) {
  return d == EdgeDecision::EdgeFavored ? "EdgeFavored" : "AbsenceFavored";
}

EdgePreference large_ess_edge_preference(const PairCounts& pc) {
  if (pc.n <= 0) throw EmptyDataError("edge preference needs at least one row");
  const double u = uniformity_from_counts(pc).u;
  EdgePreference pref;
  pref.margin = static_cast<double>(pc.n) * u -
                static_cast<double>(degrees_of_freedom(pc.a_arity, pc.b_arity, pc.cond_state_count));
  pref.decision = pref.margin > 0.0 ? EdgeDecision::EdgeFavored : EdgeDecision::AbsenceFavored;
  return pref;
}

std::vector<Fig1Row> fig1_curve(Count rows, const std::vector<double>& z_grid,
                                const std::vector<double>& alphas, bool fractional_counts) {
  if (rows <= 0) throw EmptyDataError("fig1 curve needs a positive sample size");
  std::vector<Fig1Row> out;
  out.reserve(z_grid.size() * alphas.size());
  for (double z : z_grid) {
    if (!(z >= 0.0 && z <= 0.5)) throw DomainError("z must lie in [0, 0.5]");
    std::optional<PairCounts> integral;
    std::optional<CondJointDist> dist;
    if (fractional_counts) {
      const double q = 1.0 - z;
      dist.emplace(2, 2, 1, std::vector<double>{q * q, q * z, z * q, z * z});
    } else {
      const Dataset d = synth_skewed_independent(z, rows, 2);
      integral = pair_counts(d, 0, 1, {});
    }
    for (double alpha : alphas) {
      const BdeuHyper h(alpha);
      const BfResult r = fractional_counts ? approx_log_bf(*dist, static_cast<double>(rows), h)
                                           : approx_log_bf(*integral, h);
      out.push_back(Fig1Row{z, alpha, r.exact_log_bf, *r.approx_log_bf});
    }
  }
  return out;
}

}  // namespace ess_sense
