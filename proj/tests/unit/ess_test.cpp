#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ess_sense/errors.hpp"
#include "ess_sense/ess.hpp"
#include "ess_sense/synthetic.hpp"
#include "support.hpp"

namespace ess_sense {
namespace {

Dataset binary_counts(int zeros, int ones) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(zeros), std::vector<int>{0});
  rows.insert(rows.end(), static_cast<std::size_t>(ones), std::vector<int>{1});
  return Dataset::from_rows({"X"}, {2}, rows);
}

TEST(Expectations, HandValues) {
  const auto d = binary_counts(90, 10);
  EXPECT_NEAR(expectation_under_empirical(d, Dag(1)), 0.9 * std::log(0.9) + 0.1 * std::log(0.1), 1e-15);
  EXPECT_NEAR(expectation_under_empirical(d, Dag(1)), -0.325083, 1e-6);
  EXPECT_NEAR(expectation_under_prior(d, Dag(1)), 0.5 * (std::log(0.9) + std::log(0.1)), 1e-15);
  EXPECT_NEAR(expectation_under_prior(d, Dag(1)), -1.203973, 1e-6);

  const auto u = binary_counts(50, 50);
  EXPECT_NEAR(expectation_under_empirical(u, Dag(1)), std::log(0.5), 1e-15);
  EXPECT_NEAR(expectation_under_prior(u, Dag(1)), expectation_under_empirical(u, Dag(1)), 1e-15);
}

TEST(Expectations, ZeroCellGuard) {
  const auto d = binary_counts(100, 0);
  EXPECT_NEAR(expectation_under_empirical(d, Dag(1)),
              std::log(100.0 / 101.0) + 0.01 * std::log(1.0 / 101.0), 1e-15);
  EXPECT_THROW(expectation_under_empirical(binary_counts(0, 0), Dag(1)), EmptyDataError);
}

TEST(AlphaStar, HandValue) {
  const auto e = alpha_star(binary_counts(90, 10), Dag(1));
  EXPECT_EQ(e.numerator, 1);
  EXPECT_NEAR(e.denom, 0.878890, 1e-6);
  EXPECT_NEAR(e.alpha_star, 1.1378, 1e-4);
  EXPECT_NEAR(e.alpha_star, 1.0 / e.denom, 1e-15);
  EXPECT_FALSE(e.empty_model);
}

TEST(AlphaStar, UniformDataDiverges) {
  EXPECT_THROW(alpha_star(binary_counts(50, 50), Dag(1)), DegenerateDenominatorError);
}

TEST(AlphaStar, EmptyModelIsFlagged) {
  // Every family deterministic and single-state in the data.
  const auto d = binary_counts(10, 0);
  const auto two = concat_columns(d, d);
  const auto e = alpha_star(two, Dag({{}, {0}}));
  EXPECT_EQ(e.numerator, 0);
  EXPECT_TRUE(e.empty_model);
  EXPECT_EQ(e.alpha_star, 0.0);
}

TEST(AlphaStar, DenominatorIdentity) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto d = testing::random_dataset(rng, n, 5 + static_cast<int>(rng() % 80), 3);
    const Dag g(testing::random_parent_sets(rng, n, 0.4));
    EssEstimate e;
    try {
      e = alpha_star(d, g);
    } catch (const DegenerateDenominatorError&) {
      continue;
    }
    EXPECT_NEAR(e.denom, e.entropy_gap + e.kl, 1e-9);
    EXPECT_GE(e.kl, -1e-12);
    EXPECT_NEAR(e.denom, e.expect_empirical - e.expect_prior, 1e-15);
    if (!e.empty_model && e.denom > 0) {
      EXPECT_GT(e.alpha_star, 0.0);
    }
  }
}

TEST(AlphaStar, DuplicationInsensitive) {
  std::mt19937_64 rng(72);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 30; ++trial) {
    const auto d = testing::random_dataset(rng, 3, 80, 2);
    const Dag g(testing::random_parent_sets(rng, 3, 0.5, 1));
    bool all_positive = true;
    for (int i = 0; i < 3; ++i) {
      for (Count c : family_counts(d, i, g.parents(i)).cells) all_positive = all_positive && c > 0;
    }
    if (!all_positive) continue;
    EssEstimate base;
    try {
      base = alpha_star(d, g);
    } catch (const DegenerateDenominatorError&) {
      continue;
    }
    ++checked;
    for (int m : {2, 4, 8}) {
      const auto dup = alpha_star(replicate_rows(d, m), g);
      EXPECT_NEAR(dup.alpha_star, base.alpha_star, 0.05 * base.alpha_star);
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(AlphaStar, DisjointUnionIsMediant) {
  const auto left = synth_noisy_chain(3, 200, 0.1);
  const auto right = balance_scale();
  // Row counts differ; take 200 balance rows spread over the table.
  std::vector<std::vector<int>> rows;
  for (std::size_t r = 0; r < 200; ++r) {
    std::vector<int> row;
    for (int i = 0; i < right.num_vars(); ++i) row.push_back(right.value(r * 3 % 625, i));
    rows.push_back(row);
  }
  std::vector<Variable> vars(right.variables().begin(), right.variables().end());
  const auto r200 = Dataset::from_rows(vars, rows);

  const Dag gl({{}, {0}, {1}});
  const Dag gr({{}, {0}, {0}, {0}, {0}});
  const auto el = alpha_star(left, gl);
  const auto er = alpha_star(r200, gr);
  std::vector<std::vector<int>> sets = gl.parent_sets();
  for (const auto& ps : gr.parent_sets()) {
    std::vector<int> shifted;
    for (int p : ps) shifted.push_back(p + 3);
    sets.push_back(shifted);
  }
  const auto both = alpha_star(concat_columns(left, r200), Dag(sets));
  EXPECT_GE(both.alpha_star, std::min(el.alpha_star, er.alpha_star) - 1e-12);
  EXPECT_LE(both.alpha_star, std::max(el.alpha_star, er.alpha_star) + 1e-12);
  EXPECT_EQ(both.numerator, el.numerator + er.numerator);
}

TEST(AlphaStar, InvariantUnderRelabelingAndRowOrder) {
  std::mt19937_64 rng(73);
  const auto d = testing::random_dataset(rng, 4, 70, 3);
  const Dag g({{}, {0}, {0, 1}, {2}});
  const auto base = alpha_star(d, g);

  // Flip the state labels of variable 0.
  std::vector<std::vector<int>> rows;
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    std::vector<int> row;
    for (int i = 0; i < 4; ++i) {
      const int v = d.value(r, i);
      row.push_back(i == 0 ? d.arity(0) - 1 - v : v);
    }
    rows.push_back(row);
  }
  std::vector<Variable> vars(d.variables().begin(), d.variables().end());
  const auto relabeled = Dataset::from_rows(vars, rows);
  EXPECT_NEAR(alpha_star(relabeled, g).alpha_star, base.alpha_star, 1e-9 * base.alpha_star);

  std::vector<std::size_t> order(d.num_rows());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = order.size() - 1 - r;
  EXPECT_NEAR(alpha_star(permute_rows(d, order), g).alpha_star, base.alpha_star, 1e-9 * base.alpha_star);
}

TEST(OptimalAlphaExact, FindsMaximum) {
  const auto d = synth_noisy_chain(3, 200, 0.1);
  const Dag g({{}, {0}, {1}});
  const double a = optimal_alpha_exact(d, g);
  const auto f = [&](double x) { return bdeu_graph_score(d, g, BdeuHyper(x)).total; };
  EXPECT_GE(f(a), f(a * 1.01) - 1e-9);
  EXPECT_GE(f(a), f(a / 1.01) - 1e-9);
  EXPECT_THROW(optimal_alpha_exact(d, g, 0.0, 1.0), DomainError);
}

TEST(CoordinateAscent, BalanceConvergesInOneRound) {
  const auto t = coordinate_ascent(balance_scale());
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.rounds.back().k, 1);
  EXPECT_NEAR(t.final_alpha, 44.0, 22.0);
  EXPECT_GE(t.final_alpha, 30.0);
}

TEST(CoordinateAscent, TraceShapeAndDeterminism) {
  const auto d = tic_tac_toe_endgame();
  AscentConfig cfg;
  cfg.exact_step2 = true;
  const auto t = coordinate_ascent(d, cfg);
  ASSERT_FALSE(t.rounds.empty());
  EXPECT_TRUE(t.converged);
  EXPECT_LE(t.rounds.back().k, 6);
  for (std::size_t k = 0; k < t.rounds.size(); ++k) EXPECT_EQ(t.rounds[k].k, static_cast<int>(k));
  const auto n = t.rounds.size();
  EXPECT_LT(std::abs(t.rounds[n - 1].alpha - t.rounds[n - 2].alpha), cfg.conv_tol);
  EXPECT_EQ(t.final_alpha, t.rounds.back().alpha);
  EXPECT_TRUE(t.exact_step2_alpha.has_value());

  const auto again = coordinate_ascent(d, cfg);
  ASSERT_EQ(again.rounds.size(), t.rounds.size());
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_EQ(again.rounds[k].alpha, t.rounds[k].alpha);
    EXPECT_EQ(again.rounds[k].dag, t.rounds[k].dag);
  }
}

TEST(CoordinateAscent, RoundCapStopsUnconverged) {
  AscentConfig cfg;
  cfg.max_rounds = 1;
  const auto t = coordinate_ascent(tic_tac_toe_endgame(), cfg);
  EXPECT_EQ(t.rounds.size(), 1U);
  EXPECT_FALSE(t.converged);
}

TEST(CoordinateAscent, FailureCarriesPartialTrace) {
  // Uniform over all four cells: G_0 is empty and the denominator is zero.
  const auto d = Dataset::from_rows({"A", "B"}, {2, 2}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  try {
    coordinate_ascent(d);
    FAIL() << "expected AscentFailure";
  } catch (const AscentFailure& e) {
    EXPECT_TRUE(e.trace().rounds.empty());
  }
}

TEST(CoordinateAscent, StrongDependenceGivesSmallAlpha) {
  const auto t = coordinate_ascent(synth_noisy_chain(3, 200, 0.1));
  EXPECT_TRUE(t.converged);
  EXPECT_LT(t.final_alpha, 15.0);
}

}  // namespace
}  // namespace ess_sense
