#include "ess_sense/uniformity.hpp"

#include <algorithm>
#include <cmath>

#include "ess_sense/errors.hpp"

namespace ess_sense {

CondJointDist::CondJointDist(int a_arity, int b_arity, std::size_t cond_states,
                             std::vector<double> probs)
    : a_arity_(a_arity), b_arity_(b_arity), cond_states_(cond_states), probs_(std::move(probs)) {
  if (a_arity_ < 1 || b_arity_ < 1 || cond_states_ < 1) throw DomainError("arities must be positive");
  if (probs_.size() != cond_states_ * static_cast<std::size_t>(a_arity_ * b_arity_)) {
    throw DomainError("probability table has the wrong size");
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw NormalizationError("negative or non-finite probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw NormalizationError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

CondJointDist CondJointDist::from_counts(const PairCounts& pc) {
  if (pc.n <= 0) throw EmptyDataError("pair counts are empty");
  std::vector<double> probs(pc.counts.size());
  const auto n = static_cast<double>(pc.n);
  for (std::size_t k = 0; k < probs.size(); ++k) probs[k] = static_cast<double>(pc.counts[k]) / n;
  return CondJointDist(pc.a_arity, pc.b_arity, pc.cond_state_count, std::move(probs));
}

double CondJointDist::p_a(std::size_t pi, int a) const {
  double s = 0.0;
  for (int b = 0; b < b_arity_; ++b) s += p(pi, a, b);
  return s;
}

double CondJointDist::p_b(std::size_t pi, int b) const {
  double s = 0.0;
  for (int a = 0; a < a_arity_; ++a) s += p(pi, a, b);
  return s;
}

namespace {

// Sum that does not depend on the order the values were visited in, so that
// exchanging A and B reproduces results bit for bit.
double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

double CondJointDist::p_cond(std::size_t pi) const {
  const auto width = static_cast<std::size_t>(a_arity_ * b_arity_);
  const auto first = probs_.begin() + static_cast<std::ptrdiff_t>(pi * width);
  return sorted_sum({first, first + static_cast<std::ptrdiff_t>(width)});
}

CondJointDist CondJointDist::swapped() const {
  std::vector<double> t(probs_.size());
  for (std::size_t pi = 0; pi < cond_states_; ++pi) {
    for (int a = 0; a < a_arity_; ++a) {
      for (int b = 0; b < b_arity_; ++b) {
        t[(pi * static_cast<std::size_t>(b_arity_) + static_cast<std::size_t>(b)) *
              static_cast<std::size_t>(a_arity_) +
          static_cast<std::size_t>(a)] = p(pi, a, b);
      }
    }
  }
  return CondJointDist(b_arity_, a_arity_, cond_states_, std::move(t));
}

namespace {

// The three forms cancel heavily when U is small relative to the squared
// probabilities, so they are evaluated in extended precision, marginals
// included, and rounded once at the end.
using Real = long double;

struct Marginals {
  std::vector<Real> a;   // [pi][a]
  std::vector<Real> b;   // [pi][b]
  std::vector<Real> pi;  // [pi]
};

Real sorted_sum_wide(std::vector<Real> values) {
  std::sort(values.begin(), values.end());
  Real s = 0.0L;
  for (Real v : values) s += v;
  return s;
}

Marginals marginals(const CondJointDist& p) {
  const auto A = static_cast<std::size_t>(p.a_arity());
  const auto B = static_cast<std::size_t>(p.b_arity());
  Marginals m{std::vector<Real>(p.cond_states() * A, 0.0L), std::vector<Real>(p.cond_states() * B, 0.0L),
              std::vector<Real>(p.cond_states(), 0.0L)};
  std::vector<Real> cells;
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) {
    cells.clear();
    for (int a = 0; a < p.a_arity(); ++a) {
      for (int b = 0; b < p.b_arity(); ++b) {
        const Real v = p.p(pi, a, b);
        m.a[pi * A + static_cast<std::size_t>(a)] += v;
        cells.push_back(v);
      }
    }
    for (int b = 0; b < p.b_arity(); ++b) {
      for (int a = 0; a < p.a_arity(); ++a) m.b[pi * B + static_cast<std::size_t>(b)] += p.p(pi, a, b);
    }
    m.pi[pi] = sorted_sum_wide(cells);
  }
  return m;
}

Real conditional_term(const CondJointDist& p, const Marginals& m, std::size_t pi) {
  const Real ppi = m.pi[pi];
  if (ppi <= 0.0L) return 0.0L;
  const auto nA = static_cast<std::size_t>(p.a_arity());
  const auto nB = static_cast<std::size_t>(p.b_arity());
  const auto A = static_cast<Real>(nA);
  const auto B = static_cast<Real>(nB);
  Real inner = 0.0L;
  for (std::size_t a = 0; a < nA; ++a) {
    const Real pa = m.a[pi * nA + a] / ppi;
    for (std::size_t b = 0; b < nB; ++b) {
      const Real pab = static_cast<Real>(p.p(pi, static_cast<int>(a), static_cast<int>(b))) / ppi;
      inner += pab * (A * B * pab - A * pa - B * (m.b[pi * nB + b] / ppi) + 1.0L);
    }
  }
  return static_cast<Real>(p.cond_states()) * ppi * ppi * inner;
}

std::vector<double> per_pi_terms(const CondJointDist& p) {
  const auto m = marginals(p);
  std::vector<double> out;
  out.reserve(p.cond_states());
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) out.push_back(static_cast<double>(conditional_term(p, m, pi)));
  return out;
}

}  // namespace

double uniformity_weighted_sum(const CondJointDist& p) {
  const auto m = marginals(p);
  const auto nA = static_cast<std::size_t>(p.a_arity());
  const auto nB = static_cast<std::size_t>(p.b_arity());
  const auto A = static_cast<Real>(nA);
  const auto B = static_cast<Real>(nB);
  const auto P = static_cast<Real>(p.cond_states());
  Real u = 0.0L;
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) {
    for (std::size_t a = 0; a < nA; ++a) {
      for (std::size_t b = 0; b < nB; ++b) {
        const Real pab = p.p(pi, static_cast<int>(a), static_cast<int>(b));
        u += pab * (A * B * P * pab - A * P * m.a[pi * nA + a] - B * P * m.b[pi * nB + b] + P * m.pi[pi]);
      }
    }
  }
  return static_cast<double>(u);
}

double uniformity_conditional(const CondJointDist& p) {
  const auto m = marginals(p);
  Real u = 0.0L;
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) u += conditional_term(p, m, pi);
  return static_cast<double>(u);
}

double uniformity_squared(const CondJointDist& p) {
  const auto m = marginals(p);
  const auto A = static_cast<Real>(p.a_arity());
  const auto B = static_cast<Real>(p.b_arity());
  const auto P = static_cast<Real>(p.cond_states());
  std::vector<Real> squares;
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) {
    for (int a = 0; a < p.a_arity(); ++a) {
      for (int b = 0; b < p.b_arity(); ++b) {
        const Real v = p.p(pi, a, b);
        squares.push_back(v * v);
      }
    }
  }
  const Real s_ab = sorted_sum_wide(std::move(squares));
  Real s_a = 0.0L;
  Real s_b = 0.0L;
  Real s_pi = 0.0L;
  for (Real v : m.a) s_a += v * v;
  for (Real v : m.b) s_b += v * v;
  for (Real v : m.pi) s_pi += v * v;
  // (A s_a + B s_b) is commutative, which keeps the result exactly symmetric
  // under A <-> B.
  return static_cast<double>((A * B) * P * s_ab - (A * P * s_a + B * P * s_b) + P * s_pi);
}

UniformityReport uniformity(const CondJointDist& p) {
  UniformityReport r;
  r.u = uniformity_squared(p);
  r.per_pi = per_pi_terms(p);
  return r;
}

UniformityReport uniformity_from_counts(const PairCounts& pc) {
  if (pc.n <= 0) throw EmptyDataError("uniformity needs at least one row");
  __extension__ typedef __int128 Wide;
  Wide s_ab = 0;
  Wide s_a = 0;
  Wide s_b = 0;
  Wide s_pi = 0;
  for (Count c : pc.counts) s_ab += Wide{c} * c;
  for (Count c : pc.a_marginal) s_a += Wide{c} * c;
  for (Count c : pc.b_marginal) s_b += Wide{c} * c;
  for (Count c : pc.cond_marginal) s_pi += Wide{c} * c;
  const Wide A = pc.a_arity;
  const Wide B = pc.b_arity;
  const Wide P = static_cast<Wide>(pc.cond_state_count);
  const Wide numer = A * B * P * s_ab - A * P * s_a - B * P * s_b + P * s_pi;
  const long double n = static_cast<long double>(pc.n);
  UniformityReport r;
  r.u = static_cast<double>(static_cast<long double>(numer) / (n * n));
  r.per_pi = per_pi_terms(CondJointDist::from_counts(pc));
  return r;
}

std::optional<std::size_t> minimality_witness(const CondJointDist& p, double tol) {
  for (std::size_t pi = 0; pi < p.cond_states(); ++pi) {
    const double ppi = p.p_cond(pi);
    if (ppi <= tol) continue;
    bool a_uniform = true;
    bool b_uniform = true;
    for (int a = 0; a < p.a_arity(); ++a) {
      if (std::abs(p.p_a(pi, a) / ppi - 1.0 / p.a_arity()) > tol) a_uniform = false;
    }
    for (int b = 0; b < p.b_arity(); ++b) {
      if (std::abs(p.p_b(pi, b) / ppi - 1.0 / p.b_arity()) > tol) b_uniform = false;
    }
    if (!a_uniform && !b_uniform) return pi;
    for (int a = 0; a < p.a_arity(); ++a) {
      for (int b = 0; b < p.b_arity(); ++b) {
        const double joint = p.p(pi, a, b) / ppi;
        const double product = (p.p_a(pi, a) / ppi) * (p.p_b(pi, b) / ppi);
        if (std::abs(joint - product) > tol) return pi;
      }
    }
  }
  return std::nullopt;
}

}  // namespace ess_sense
