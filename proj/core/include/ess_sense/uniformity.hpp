#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ess_sense/dataset.hpp"

namespace ess_sense {

// Joint distribution p(a, b, pi) over two variables and a conditioning set,
// stored [(pi * a_arity + a) * b_arity + b].
class CondJointDist {
 public:
  // Throws NormalizationError unless entries are nonnegative and sum to 1
  // within 1e-12.
  CondJointDist(int a_arity, int b_arity, std::size_t cond_states, std::vector<double> probs);

  static CondJointDist from_counts(const PairCounts& pc);

  int a_arity() const { return a_arity_; }
  int b_arity() const { return b_arity_; }
  std::size_t cond_states() const { return cond_states_; }
  const std::vector<double>& probs() const { return probs_; }

  double p(std::size_t pi, int a, int b) const {
    return probs_[(pi * static_cast<std::size_t>(a_arity_) + static_cast<std::size_t>(a)) *
                      static_cast<std::size_t>(b_arity_) +
                  static_cast<std::size_t>(b)];
  }
  double p_a(std::size_t pi, int a) const;
  double p_b(std::size_t pi, int b) const;
  double p_cond(std::size_t pi) const;

  // Same distribution with the roles of A and B exchanged.
  CondJointDist swapped() const;

 private:
  int a_arity_;
  int b_arity_;
  std::size_t cond_states_;
  std::vector<double> probs_;
};

struct UniformityReport {
  double u = 0.0;
  // |Pi| p(pi)^2 sum_{a,b} p(a,b|pi)(|A,B| p(a,b|pi) - |A| p(a|pi) - |B| p(b|pi) + 1)
  std::vector<double> per_pi;
};

// u from the squared-probability form; per_pi from the conditional form.
UniformityReport uniformity(const CondJointDist& p);

// The three algebraically equivalent forms, exposed for cross-checking.
double uniformity_weighted_sum(const CondJointDist& p);
double uniformity_conditional(const CondJointDist& p);
double uniformity_squared(const CondJointDist& p);

// Empirical p(a,b,pi) = N_{a,b,pi} / N. The total u is evaluated from
// integer sums of squared counts, so it is exact up to one final division.
// Throws EmptyDataError when N = 0.
UniformityReport uniformity_from_counts(const PairCounts& pc);

inline constexpr double kDefaultWitnessTol = 1e-9;

// A conditioning state with p(pi) > tol where A and B are dependent, or
// where neither conditional marginal is uniform (all beyond tol). Empty when
// no such state exists, i.e. when u vanishes.
std::optional<std::size_t> minimality_witness(const CondJointDist& p,
                                              double tol = kDefaultWitnessTol);

}  // namespace ess_sense
