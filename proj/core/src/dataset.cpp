#include "ess_sense/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ess_sense/errors.hpp"

namespace ess_sense {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

void check_family_indices(const Dataset& d, int child, std::span<const int> parents) {
  const int n = d.num_vars();
  if (child < 0 || child >= n) throw DomainError("child index out of range");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : parents) {
    if (p < 0 || p >= n) throw DomainError("parent index out of range");
    if (p == child) throw DomainError("variable listed as its own parent");
    if (seen[static_cast<std::size_t>(p)]) throw DomainError("duplicate parent index");
    seen[static_cast<std::size_t>(p)] = true;
  }
}

}  // namespace

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::uint16_t> cells)
    : variables_(std::move(variables)), cells_(std::move(cells)) {
  const std::size_t n = variables_.size();
  if (n == 0) {
    if (!cells_.empty()) throw DomainError("cells given for a dataset without variables");
    return;
  }
  if (cells_.size() % n != 0) throw DomainError("cell count is not a multiple of the variable count");
  num_rows_ = cells_.size() / n;
  for (const auto& v : variables_) {
    if (v.states.empty()) throw DomainError("variable '" + v.name + "' has no states");
    if (v.states.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DomainError("variable '" + v.name + "' has too many states");
    }
  }
  for (std::size_t r = 0; r < num_rows_; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      if (cells_[r * n + i] >= variables_[i].states.size()) {
        throw DomainError("state index out of range for variable '" + variables_[i].name + "'");
      }
    }
  }
}

Dataset Dataset::from_rows(std::vector<Variable> variables,
                           const std::vector<std::vector<int>>& rows) {
  std::vector<std::uint16_t> cells;
  cells.reserve(rows.size() * variables.size());
  for (const auto& row : rows) {
    if (row.size() != variables.size()) throw DomainError("row width differs from variable count");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < 0 || row[i] >= variables[i].arity()) {
        throw DomainError("state index out of range for variable '" + variables[i].name + "'");
      }
      cells.push_back(static_cast<std::uint16_t>(row[i]));
    }
  }
  return Dataset(std::move(variables), std::move(cells));
}

Dataset Dataset::from_rows(const std::vector<std::string>& names, const std::vector<int>& arities,
                           const std::vector<std::vector<int>>& rows) {
  if (names.size() != arities.size()) throw DomainError("names and arities differ in length");
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Variable v{names[i], {}};
    for (int s = 0; s < arities[i]; ++s) v.states.push_back(std::to_string(s));
    vars.push_back(std::move(v));
  }
  return from_rows(std::move(vars), rows);
}

std::vector<int> Dataset::arities() const {
  std::vector<int> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.arity());
  return out;
}

int Dataset::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return static_cast<int>(i);
  }
  throw UsageError("unknown variable '" + std::string(name) + "'");
}

Dataset load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row");
  std::vector<Variable> vars;
  for (auto name : split_commas(line)) {
    if (name.empty()) throw ParseError("empty variable name in header");
    for (const auto& v : vars) {
      if (v.name == name) throw ParseError("duplicate column name '" + v.name + "'");
    }
    vars.push_back(Variable{std::string(name), {}});
  }
  const std::size_t n = vars.size();
  std::vector<std::unordered_map<std::string, std::uint16_t>> lookup(n);
  std::vector<std::uint16_t> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split_commas(line);
    if (tokens.size() != n) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                       " fields, found " + std::to_string(tokens.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (tokens[i].empty() || tokens[i] == "?") {
        throw MissingDataError("line " + std::to_string(line_no) + ": missing value in column '" +
                               vars[i].name + "'");
      }
      std::string tok(tokens[i]);
      auto [it, inserted] = lookup[i].try_emplace(tok, static_cast<std::uint16_t>(vars[i].states.size()));
      if (inserted) {
        if (vars[i].states.size() >= std::numeric_limits<std::uint16_t>::max()) {
          throw ParseError("column '" + vars[i].name + "' has too many distinct tokens");
        }
        vars[i].states.push_back(std::move(tok));
      }
      cells.push_back(it->second);
    }
  }
  for (const auto& v : vars) {
    if (v.arity() < 2) {
      throw DegenerateVariableError("column '" + v.name + "' has " + std::to_string(v.arity()) +
                                    " distinct value(s); at least 2 are required");
    }
  }
  return Dataset(std::move(vars), std::move(cells));
}

Dataset load_csv_file(const std::string& path) {
  if (path == "-") return load_csv(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load_csv(in);
}

void write_csv(std::ostream& out, const Dataset& d) {
  for (int i = 0; i < d.num_vars(); ++i) out << (i ? "," : "") << d.variable(i).name;
  out << '\n';
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    for (int i = 0; i < d.num_vars(); ++i) {
      out << (i ? "," : "") << d.variable(i).states[static_cast<std::size_t>(d.value(r, i))];
    }
    out << '\n';
  }
}

Count FamilyCounts::total() const { return std::accumulate(cells.begin(), cells.end(), Count{0}); }

std::size_t joint_state(const Dataset& d, std::size_t r, std::span<const int> vars) {
  std::size_t s = 0;
  for (int v : vars) {
    s = s * static_cast<std::size_t>(d.arity(v)) + static_cast<std::size_t>(d.value(r, v));
  }
  return s;
}

std::size_t joint_state_count(const Dataset& d, std::span<const int> vars, std::size_t max_cells) {
  std::size_t count = 1;
  for (int v : vars) {
    const auto a = static_cast<std::size_t>(d.arity(v));
    if (count > max_cells / a) {
      throw TableTooLargeError("joint state count exceeds the table cap of " +
                               std::to_string(max_cells));
    }
    count *= a;
  }
  return count;
}

FamilyCounts family_counts(const Dataset& d, int child, std::span<const int> parents,
                           std::size_t max_cells) {
  check_family_indices(d, child, parents);
  FamilyCounts fc;
  fc.child = child;
  fc.parents.assign(parents.begin(), parents.end());
  fc.child_arity = d.arity(child);
  fc.parent_state_count = joint_state_count(d, parents, max_cells);
  if (fc.parent_state_count > max_cells / static_cast<std::size_t>(fc.child_arity)) {
    throw TableTooLargeError("family table exceeds the table cap of " + std::to_string(max_cells));
  }
  fc.cells.assign(fc.parent_state_count * static_cast<std::size_t>(fc.child_arity), 0);
  fc.parent_counts.assign(fc.parent_state_count, 0);
  const auto ca = static_cast<std::size_t>(fc.child_arity);
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const std::size_t pi = joint_state(d, r, parents);
    ++fc.cells[pi * ca + static_cast<std::size_t>(d.value(r, child))];
    ++fc.parent_counts[pi];
  }
  return fc;
}

PairCounts pair_counts(const Dataset& d, int a, int b, std::span<const int> cond,
                       std::size_t max_cells) {
  if (a == b) throw DomainError("pair variables must differ");
  check_family_indices(d, a, cond);
  check_family_indices(d, b, cond);
  PairCounts pc;
  pc.a_var = a;
  pc.b_var = b;
  pc.cond.assign(cond.begin(), cond.end());
  pc.a_arity = d.arity(a);
  pc.b_arity = d.arity(b);
  pc.cond_state_count = joint_state_count(d, cond, max_cells);
  const auto aa = static_cast<std::size_t>(pc.a_arity);
  const auto ba = static_cast<std::size_t>(pc.b_arity);
  if (pc.cond_state_count > max_cells / (aa * ba)) {
    throw TableTooLargeError("pair table exceeds the table cap of " + std::to_string(max_cells));
  }
  pc.counts.assign(pc.cond_state_count * aa * ba, 0);
  pc.a_marginal.assign(pc.cond_state_count * aa, 0);
  pc.b_marginal.assign(pc.cond_state_count * ba, 0);
  pc.cond_marginal.assign(pc.cond_state_count, 0);
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const std::size_t pi = joint_state(d, r, cond);
    const auto va = static_cast<std::size_t>(d.value(r, a));
    const auto vb = static_cast<std::size_t>(d.value(r, b));
    ++pc.counts[(pi * aa + va) * ba + vb];
    ++pc.a_marginal[pi * aa + va];
    ++pc.b_marginal[pi * ba + vb];
    ++pc.cond_marginal[pi];
  }
  pc.n = static_cast<Count>(d.num_rows());
  return pc;
}

Dataset replicate_rows(const Dataset& d, int copies) {
  if (copies < 1) throw DomainError("copies must be positive");
  std::vector<std::uint16_t> cells;
  const auto n = static_cast<std::size_t>(d.num_vars());
  cells.reserve(d.num_rows() * n * static_cast<std::size_t>(copies));
  for (int c = 0; c < copies; ++c) {
    for (std::size_t r = 0; r < d.num_rows(); ++r) {
      const auto row = d.row(r);
      cells.insert(cells.end(), row.begin(), row.end());
    }
  }
  return Dataset({d.variables().begin(), d.variables().end()}, std::move(cells));
}

Dataset permute_rows(const Dataset& d, std::span<const std::size_t> order) {
  if (order.size() != d.num_rows()) throw DomainError("row permutation has the wrong length");
  std::vector<std::uint16_t> cells;
  cells.reserve(d.num_rows() * static_cast<std::size_t>(d.num_vars()));
  for (std::size_t r : order) {
    const auto row = d.row(r);
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return Dataset({d.variables().begin(), d.variables().end()}, std::move(cells));
}

Dataset concat_columns(const Dataset& left, const Dataset& right) {
  if (left.num_rows() != right.num_rows()) throw DomainError("row counts differ");
  std::vector<Variable> vars(left.variables().begin(), left.variables().end());
  vars.insert(vars.end(), right.variables().begin(), right.variables().end());
  std::vector<std::uint16_t> cells;
  cells.reserve(left.num_rows() * vars.size());
  for (std::size_t r = 0; r < left.num_rows(); ++r) {
    const auto l = left.row(r);
    const auto rr = right.row(r);
    cells.insert(cells.end(), l.begin(), l.end());
    cells.insert(cells.end(), rr.begin(), rr.end());
  }
  return Dataset(std::move(vars), std::move(cells));
}

Dataset select_columns(const Dataset& d, std::span<const int> columns) {
  std::vector<Variable> vars;
  for (int c : columns) vars.push_back(d.variable(c));
  std::vector<std::uint16_t> cells;
  cells.reserve(d.num_rows() * columns.size());
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    for (int c : columns) cells.push_back(static_cast<std::uint16_t>(d.value(r, c)));
  }
  return Dataset(std::move(vars), std::move(cells));
}

}  // namespace ess_sense
