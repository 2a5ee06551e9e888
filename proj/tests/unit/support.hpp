#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's own counting or log-gamma code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ess_sense/dataset.hpp"
#include "ess_sense/uniformity.hpp"

namespace ess_sense::testing {

// log Gamma(n + a) - log Gamma(a) as sum_{k<n} log(a + k).
inline double lgr_telescoping(std::int64_t n, double a) {
  double s = 0.0;
  for (std::int64_t k = 0; k < n; ++k) s += std::log(a + static_cast<double>(k));
  return s;
}

// (parent values..., child value) -> count, by scanning rows.
inline std::map<std::vector<int>, std::int64_t> tally(const Dataset& d, int child,
                                                      const std::vector<int>& parents) {
  std::map<std::vector<int>, std::int64_t> out;
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    std::vector<int> key;
    for (int p : parents) key.push_back(d.value(r, p));
    key.push_back(d.value(r, child));
    ++out[key];
  }
  return out;
}

// BDeu family score from a row tally and telescoping sums.
inline double bdeu_family_oracle(const Dataset& d, int child, const std::vector<int>& parents,
                                 double alpha) {
  double q = 1.0;
  for (int p : parents) q *= d.arity(p);
  const double r = d.arity(child);
  const auto counts = tally(d, child, parents);
  std::map<std::vector<int>, std::int64_t> parent_totals;
  double s = 0.0;
  for (const auto& [key, n] : counts) {
    s += lgr_telescoping(n, alpha / (q * r));
    parent_totals[std::vector<int>(key.begin(), key.end() - 1)] += n;
  }
  for (const auto& [key, n] : parent_totals) s -= lgr_telescoping(n, alpha / q);
  return s;
}

inline Dataset random_dataset(std::mt19937_64& rng, int n_vars, int rows, int max_arity) {
  std::uniform_int_distribution<int> ar(2, max_arity);
  std::vector<std::string> names;
  std::vector<int> arities;
  for (int i = 0; i < n_vars; ++i) {
    names.push_back("V" + std::to_string(i));
    arities.push_back(ar(rng));
  }
  std::vector<std::vector<int>> data(static_cast<std::size_t>(rows));
  for (auto& row : data) {
    for (int i = 0; i < n_vars; ++i) {
      row.push_back(std::uniform_int_distribution<int>(0, arities[static_cast<std::size_t>(i)] - 1)(rng));
    }
  }
  return Dataset::from_rows(names, arities, data);
}

// Random DAG: random order, each forward pair an edge with probability p.
inline std::vector<std::vector<int>> random_parent_sets(std::mt19937_64& rng, int n, double p,
                                                        int max_parents = 64) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      auto& ps = parents[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
      if (static_cast<int>(ps.size()) < max_parents && coin(rng)) {
        ps.push_back(order[static_cast<std::size_t>(i)]);
      }
    }
  }
  return parents;
}

inline CondJointDist random_dist(std::mt19937_64& rng, int a, int b, std::size_t pi) {
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution sparse(0.15);
  std::vector<double> w(static_cast<std::size_t>(a * b) * pi);
  double total = 0.0;
  for (auto& x : w) {
    x = sparse(rng) ? 0.0 : ex(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return CondJointDist(a, b, pi, std::move(w));
}

// Product p(pi) p(a|pi) p(b|pi) from the given factors, laid out like
// CondJointDist.
inline CondJointDist product_dist(const std::vector<double>& p_pi,
                                  const std::vector<std::vector<double>>& p_a,
                                  const std::vector<std::vector<double>>& p_b) {
  const int a = static_cast<int>(p_a[0].size());
  const int b = static_cast<int>(p_b[0].size());
  std::vector<double> w;
  for (std::size_t pi = 0; pi < p_pi.size(); ++pi) {
    for (int i = 0; i < a; ++i) {
      for (int j = 0; j < b; ++j) {
        w.push_back(p_pi[pi] * p_a[pi][static_cast<std::size_t>(i)] * p_b[pi][static_cast<std::size_t>(j)]);
      }
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (auto& x : w) x /= total;
  return CondJointDist(a, b, p_pi.size(), std::move(w));
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(static_cast<std::size_t>(k));
  double t = 0.0;
  for (auto& x : v) t += (x = ex(rng) + 1e-3);
  for (auto& x : v) x /= t;
  return v;
}

// Eq-4-style weighted sum written out directly.
inline double uniformity_oracle(const CondJointDist& p) {
  const int A = p.a_arity();
  const int B = p.b_arity();
  const auto P = static_cast<double>(p.cond_states());
  double u = 0.0;
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) {
    double ppi = 0.0;
    std::vector<double> pa(static_cast<std::size_t>(A), 0.0);
    std::vector<double> pb(static_cast<std::size_t>(B), 0.0);
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        ppi += p.p(pi, a, b);
        pa[static_cast<std::size_t>(a)] += p.p(pi, a, b);
        pb[static_cast<std::size_t>(b)] += p.p(pi, a, b);
      }
    }
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        const double x = p.p(pi, a, b);
        u += x * (A * B * P * x - A * P * pa[static_cast<std::size_t>(a)] -
                  B * P * pb[static_cast<std::size_t>(b)] + P * ppi);
      }
    }
  }
  return u;
}

}  // namespace ess_sense::testing
