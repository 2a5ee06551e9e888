#pragma once

#include <cstdint>

#include "ess_sense/dataset.hpp"

namespace ess_sense {

// Binary variables whose empirical joint factorizes exactly with
// p(X_i = 1) = z for every variable. Row count is `rows`; every cell count
// rows * prod p(x_i) must be an integer or NonRepresentableError is thrown.
// Rows are emitted in ascending joint-state order.
Dataset synth_skewed_independent(double z, Count rows, int n_vars);

// Binary variables, each with exactly round(p * rows) ones placed by a seeded
// shuffle, independently per variable. Deterministic given the seed.
Dataset synth_bernoulli_independent(double p, Count rows, int n_vars, std::uint64_t seed);

// Binary Markov chain X_0 -> X_1 -> ... with X_0 uniform and each link
// copying its predecessor except with probability `flip`. Cell counts must
// be integral, as for synth_skewed_independent.
Dataset synth_noisy_chain(int n_vars, Count rows, double flip);

// The 958 distinct terminal boards of tic-tac-toe games with x moving first,
// nine square columns (x/o/b) plus a positive/negative class for an x win.
Dataset tic_tac_toe_endgame();

// All 625 balance-scale configurations (weights and distances 1..5 on each
// side) with the tip direction L/B/R as the first column.
Dataset balance_scale();

}  // namespace ess_sense
