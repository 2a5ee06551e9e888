#include "ess_sense/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "ess_sense/errors.hpp"

namespace ess_sense {

namespace {

std::vector<Variable> binary_variables(int n_vars) {
  std::vector<Variable> vars;
  for (int i = 0; i < n_vars; ++i) vars.push_back(Variable{"X" + std::to_string(i), {"0", "1"}});
  return vars;
}

Count integral_cell(double target) {
  const double rounded = std::round(target);
  if (std::abs(target - rounded) > 1e-9 * std::max(1.0, std::abs(target))) {
    throw NonRepresentableError("cell target " + std::to_string(target) + " is not an integer");
  }
  return static_cast<Count>(rounded);
}

// Emits each joint state of `n_vars` binary variables `count(state)` times,
// in ascending state order with X0 as the most significant bit.
template <typename CountFn>
Dataset expand_binary_joint(int n_vars, Count rows, CountFn count) {
  std::vector<std::uint16_t> cells;
  Count total = 0;
  const std::uint64_t states = std::uint64_t{1} << n_vars;
  for (std::uint64_t s = 0; s < states; ++s) {
    const Count c = count(s);
    total += c;
    for (Count k = 0; k < c; ++k) {
      for (int i = 0; i < n_vars; ++i) {
        cells.push_back(static_cast<std::uint16_t>((s >> (n_vars - 1 - i)) & 1U));
      }
    }
  }
  if (total != rows) throw NonRepresentableError("cell counts do not sum to the row count");
  return Dataset(binary_variables(n_vars), std::move(cells));
}

int bit(std::uint64_t s, int n_vars, int i) { return static_cast<int>((s >> (n_vars - 1 - i)) & 1U); }

}  // namespace

Dataset synth_skewed_independent(double z, Count rows, int n_vars) {
  if (!(z >= 0.0 && z <= 0.5)) throw DomainError("z must lie in [0, 0.5]");
  if (n_vars < 2 || n_vars > 20) throw DomainError("n_vars must lie in [2, 20]");
  if (rows < 0) throw DomainError("row count must be nonnegative");
  return expand_binary_joint(n_vars, rows, [&](std::uint64_t s) {
    double target = static_cast<double>(rows);
    for (int i = 0; i < n_vars; ++i) target *= bit(s, n_vars, i) ? z : 1.0 - z;
    return integral_cell(target);
  });
}

Dataset synth_bernoulli_independent(double p, Count rows, int n_vars, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (n_vars < 1 || rows < 0) throw DomainError("bad generator size");
  const auto n = static_cast<std::size_t>(rows);
  const auto ones = static_cast<std::size_t>(std::llround(p * static_cast<double>(rows)));
  std::mt19937_64 rng(seed);
  std::vector<std::uint16_t> cells(n * static_cast<std::size_t>(n_vars), 0);
  std::vector<std::size_t> order(n);
  for (int i = 0; i < n_vars; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the engine directly; std::shuffle's output is
    // implementation-defined.
    for (std::size_t k = n; k > 1; --k) {
      const std::size_t j = static_cast<std::size_t>(rng() % k);
      std::swap(order[k - 1], order[j]);
    }
    for (std::size_t k = 0; k < ones; ++k) {
      cells[order[k] * static_cast<std::size_t>(n_vars) + static_cast<std::size_t>(i)] = 1;
    }
  }
  return Dataset(binary_variables(n_vars), std::move(cells));
}

Dataset synth_noisy_chain(int n_vars, Count rows, double flip) {
  if (n_vars < 2 || n_vars > 20) throw DomainError("n_vars must lie in [2, 20]");
  if (!(flip >= 0.0 && flip <= 1.0)) throw DomainError("flip must lie in [0, 1]");
  return expand_binary_joint(n_vars, rows, [&](std::uint64_t s) {
    double target = static_cast<double>(rows) * 0.5;
    for (int i = 1; i < n_vars; ++i) {
      target *= bit(s, n_vars, i) == bit(s, n_vars, i - 1) ? 1.0 - flip : flip;
    }
    return integral_cell(target);
  });
}

Dataset tic_tac_toe_endgame() {
  using Board = std::array<char, 9>;
  static constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                       {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  const auto wins = [](const Board& b, char p) {
    for (const auto& l : kLines) {
      if (b[l[0]] == p && b[l[1]] == p && b[l[2]] == p) return true;
    }
    return false;
  };
  std::set<Board> terminal;
  Board start;
  start.fill('b');
  // Depth-first over all games; a board is terminal on a win or when full.
  const auto play = [&](auto&& self, Board& b, char mover, int filled) -> void {
    if (wins(b, 'x') || wins(b, 'o') || filled == 9) {
      terminal.insert(b);
      return;
    }
    for (int sq = 0; sq < 9; ++sq) {
      if (b[sq] != 'b') continue;
      b[sq] = mover;
      self(self, b, mover == 'x' ? 'o' : 'x', filled + 1);
      b[sq] = 'b';
    }
  };
  play(play, start, 'x', 0);

  static const char* kNames[9] = {"top-left-square",    "top-middle-square",    "top-right-square",
                                  "middle-left-square", "middle-middle-square", "middle-right-square",
                                  "bottom-left-square", "bottom-middle-square", "bottom-right-square"};
  std::vector<Variable> vars;
  for (const char* name : kNames) vars.push_back(Variable{name, {"x", "o", "b"}});
  vars.push_back(Variable{"Class", {"positive", "negative"}});
  std::vector<std::uint16_t> cells;
  const auto state_of = [](char c) -> std::uint16_t { return c == 'x' ? 0 : c == 'o' ? 1 : 2; };
  for (const auto& b : terminal) {
    for (char c : b) cells.push_back(state_of(c));
    cells.push_back(wins(b, 'x') ? 0 : 1);
  }
  return Dataset(std::move(vars), std::move(cells));
}

Dataset balance_scale() {
  std::vector<Variable> vars;
  vars.push_back(Variable{"Class-Name", {"L", "B", "R"}});
  for (const char* name : {"Left-Weight", "Left-Distance", "Right-Weight", "Right-Distance"}) {
    vars.push_back(Variable{name, {"1", "2", "3", "4", "5"}});
  }
  std::vector<std::uint16_t> cells;
  for (int lw = 1; lw <= 5; ++lw) {
    for (int ld = 1; ld <= 5; ++ld) {
      for (int rw = 1; rw <= 5; ++rw) {
        for (int rd = 1; rd <= 5; ++rd) {
          const int left = lw * ld;
          const int right = rw * rd;
          cells.push_back(left > right ? 0 : left == right ? 1 : 2);
          for (int v : {lw, ld, rw, rd}) cells.push_back(static_cast<std::uint16_t>(v - 1));
        }
      }
    }
  }
  return Dataset(std::move(vars), std::move(cells));
}

}  // namespace ess_sense
