#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "ess_sense/bayes_factor.hpp"
#include "ess_sense/errors.hpp"
#include "ess_sense/ess.hpp"
#include "ess_sense/json_io.hpp"
#include "ess_sense/search.hpp"
#include "ess_sense/synthetic.hpp"
#include "ess_sense/uniformity.hpp"

namespace ess_sense::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct Options {
  std::string data;
  std::string graph;
  std::string out = "-";
  std::string format = "csv";
  std::string criterion = "bdeu";
  double ess = 1.0;
  bool exact = false;
  bool greedy = false;
  int max_indegree = -1;

  double alpha_min = 0.01;
  double alpha_max = 1e6;
  int points = 25;
  bool log_grid = false;
  bool linear_grid = false;

  Count n = 100;
  std::vector<double> alphas{1, 10, 100, 1000, 10000};
  double z_step = 0.05;
  double z_max = 0.5;
  bool integer_counts = false;

  int max_rounds = 20;
  double conv_tol = 0.1;
  bool exact_step2 = false;

  std::string a;
  std::string b;
  std::vector<std::string> given;

  std::string kind;
  Count rows = 200;
  int vars = 5;
  double z = 0.1;
  double p = 0.05;
  double flip = 0.1;
  std::uint64_t seed = 1;
};

// Writes to the named file, or to the caller's stream for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ParseError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_json(const Options& o, std::ostream& out, const json& j) {
  Sink sink(o.out, out);
  sink.get() << j.dump(2) << '\n';
}

void csv_header(std::ostream& os, const std::string& cmd, const std::string& columns) {
  os << "# ess-sense v1 " << cmd << '\n' << columns << '\n';
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SearchMode search_mode(const Options& o) {
  if (o.exact) return SearchMode::Exact;
  if (o.greedy) return SearchMode::Greedy;
  return SearchMode::Auto;
}

SearchOptions search_options(const Options& o) {
  SearchOptions s;
  s.max_indegree = o.max_indegree;
  return s;
}

void require_alpha(double alpha, const char* flag) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw UsageError(std::string(flag) + " must be positive and finite");
  }
}

Criterion criterion_from(const Options& o, bool ess_given, std::ostream& err) {
  const auto kind = parse_criterion_kind(o.criterion);
  if (kind == Criterion::Kind::BDeu) {
    require_alpha(o.ess, "--ess");
    return Criterion::bdeu(o.ess);
  }
  if (ess_given) err << "warning: --ess is ignored by --criterion " << o.criterion << '\n';
  return kind == Criterion::Kind::BIC ? Criterion::bic() : Criterion::aic();
}

struct Pair {
  int a = 0;
  int b = 0;
  std::vector<int> cond;
};

Pair resolve_pair(const Dataset& d, const Options& o) {
  Pair p{d.index_of(o.a), d.index_of(o.b), {}};
  if (p.a == p.b) throw UsageError("--a and --b must name different variables");
  for (const auto& name : o.given) {
    const int idx = d.index_of(name);
    if (idx == p.a || idx == p.b) throw UsageError("--given must not contain --a or --b");
    if (std::find(p.cond.begin(), p.cond.end(), idx) != p.cond.end()) {
      throw UsageError("--given repeats '" + name + "'");
    }
    p.cond.push_back(idx);
  }
  return p;
}

int cmd_score(const Options& o, bool ess_given, std::ostream& out, std::ostream& err) {
  const auto d = load_csv_file(o.data);
  const Dag g = o.graph.empty() ? Dag(d.num_vars()) : dag_from_json_text(read_text(o.graph), d);
  const auto c = criterion_from(o, ess_given, err);
  emit_json(o, out, score_to_json(graph_score(d, g, c), d));
  return kExitOk;
}

int cmd_learn(const Options& o, bool ess_given, std::ostream& out, std::ostream& err) {
  const auto d = load_csv_file(o.data);
  const auto c = criterion_from(o, ess_given, err);
  const auto r = run_search(d, c, search_mode(o), search_options(o));
  auto j = search_result_to_json(r, d);
  j["criterion"] = to_string(c.kind);
  if (c.kind == Criterion::Kind::BDeu) j["alpha"] = c.alpha;
  emit_json(o, out, j);
  return kExitOk;
}

int cmd_ess_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  require_alpha(o.alpha_min, "--alpha-min");
  require_alpha(o.alpha_max, "--alpha-max");
  const auto d = load_csv_file(o.data);
  const auto alphas = alpha_grid(o.alpha_min, o.alpha_max, o.points, !o.linear_grid);
  const auto rows = ess_sweep(d, alphas, search_mode(o), search_options(o));
  for (const auto& r : rows) {
    if (!r.error.empty()) err << "warning: alpha=" << format_double(r.alpha) << ": " << r.error << '\n';
  }
  Sink sink(o.out, out);
  auto& os = sink.get();
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json row{{"alpha", r.alpha}};
      row["edges"] = r.edges ? json(*r.edges) : json(nullptr);
      row["score"] = r.score ? json(*r.score) : json(nullptr);
      if (!r.error.empty()) row["error"] = r.error;
      arr.push_back(std::move(row));
    }
    os << arr.dump(2) << '\n';
    return kExitOk;
  }
  csv_header(os, "ess-sweep", "alpha,edges,score");
  for (const auto& r : rows) {
    os << format_double(r.alpha) << ',';
    if (r.error.empty()) {
      os << *r.edges << ',' << format_double(*r.score) << '\n';
    } else {
      os << "NA,NA\n";
    }
  }
  return kExitOk;
}

int cmd_fig1(const Options& o, std::ostream& out) {
  if (!(o.z_step > 0.0) || !(o.z_max >= 0.0) || o.z_max > 0.5) {
    throw UsageError("--z-step must be positive and --z-max within [0, 0.5]");
  }
  if (o.n < 1) throw UsageError("--n must be at least 1");
  for (double a : o.alphas) require_alpha(a, "--alphas");
  std::vector<double> zs;
  const auto steps = static_cast<long>(std::floor(o.z_max / o.z_step + 1e-9));
  for (long i = 0; i <= steps; ++i) zs.push_back(static_cast<double>(i) * o.z_step);
  const auto rows = fig1_curve(o.n, zs, o.alphas, !o.integer_counts);

  Sink sink(o.out, out);
  auto& os = sink.get();
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"z", r.z}, {"alpha", r.alpha}, {"exact", r.exact}, {"approx", r.approx}});
    }
    os << arr.dump(2) << '\n';
    return kExitOk;
  }
  csv_header(os, "fig1", "z,alpha,exact,approx");
  for (const auto& r : rows) {
    os << format_double(r.z) << ',' << format_double(r.alpha) << ',' << format_double(r.exact) << ','
       << format_double(r.approx) << '\n';
  }
  return kExitOk;
}

int cmd_optimal_ess(const Options& o, std::ostream& out, std::ostream& err) {
  const auto d = load_csv_file(o.data);
  AscentConfig cfg;
  cfg.max_rounds = o.max_rounds;
  cfg.conv_tol = o.conv_tol;
  cfg.mode = search_mode(o);
  cfg.search = search_options(o);
  cfg.exact_step2 = o.exact_step2;
  try {
    const auto trace = coordinate_ascent(d, cfg);
    if (!trace.converged) {
      err << "warning: no convergence within " << o.max_rounds << " rounds\n";
    }
    emit_json(o, out, ascent_trace_to_json(trace, d));
    return kExitOk;
  } catch (const AscentFailure& e) {
    auto j = ascent_trace_to_json(e.trace(), d);
    j["error"] = e.what();
    emit_json(o, out, j);
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

int cmd_uniformity(const Options& o, std::ostream& out) {
  const auto d = load_csv_file(o.data);
  const auto p = resolve_pair(d, o);
  const auto pc = pair_counts(d, p.a, p.b, p.cond);
  auto j = uniformity_to_json(uniformity_from_counts(pc));
  j["a"] = o.a;
  j["b"] = o.b;
  j["given"] = o.given;
  j["n"] = pc.n;
  emit_json(o, out, j);
  return kExitOk;
}

int cmd_bayes_factor(const Options& o, std::ostream& out) {
  require_alpha(o.ess, "--ess");
  const auto d = load_csv_file(o.data);
  const auto p = resolve_pair(d, o);
  const auto pc = pair_counts(d, p.a, p.b, p.cond);
  auto j = bf_result_to_json(approx_log_bf(pc, BdeuHyper(o.ess)));
  const auto pref = large_ess_edge_preference(pc);
  j["a"] = o.a;
  j["b"] = o.b;
  j["given"] = o.given;
  j["large_ess_decision"] = to_string(pref.decision);
  j["margin"] = pref.margin;
  emit_json(o, out, j);
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  Dataset d;
  if (o.kind == "tictac") {
    d = tic_tac_toe_endgame();
  } else if (o.kind == "balance") {
    d = balance_scale();
  } else if (o.kind == "skewed") {
    d = synth_skewed_independent(o.z, o.rows, o.vars);
  } else if (o.kind == "bernoulli") {
    d = synth_bernoulli_independent(o.p, o.rows, o.vars, o.seed);
  } else if (o.kind == "chain") {
    d = synth_noisy_chain(o.vars, o.rows, o.flip);
  } else {
    throw UsageError("unknown --kind '" + o.kind + "'");
  }
  Sink sink(o.out, out);
  write_csv(sink.get(), d);
  return kExitOk;
}

void add_search_flags(CLI::App* cmd, Options& o) {
  auto* ex = cmd->add_flag("--exact", o.exact, "exact dynamic programming (n <= 20)");
  auto* gr = cmd->add_flag("--greedy", o.greedy, "hill climbing from the empty graph");
  ex->excludes(gr);
  gr->excludes(ex);
  cmd->add_option("--max-indegree", o.max_indegree, "parent-set size cap")->check(CLI::NonNegativeNumber);
}

void add_out(CLI::App* cmd, Options& o) {
  cmd->add_option("--out,-o", o.out, "output path, '-' for stdout")->capture_default_str();
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"BDeu structure learning and equivalent sample size analysis", "ess-sense"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ess-sense 0.1.0");

  auto* score = app.add_subcommand("score", "score a graph");
  score->add_option("--data", o.data, "CSV file or '-'")->required();
  score->add_option("--graph", o.graph, "graph JSON; empty graph when omitted");
  auto* score_ess = score->add_option("--ess", o.ess, "equivalent sample size")->capture_default_str();
  score->add_option("--criterion", o.criterion, "bdeu, bic or aic")->capture_default_str();
  add_out(score, o);

  auto* learn = app.add_subcommand("learn", "MAP graph for one criterion");
  learn->add_option("--data", o.data, "CSV file or '-'")->required();
  auto* learn_ess = learn->add_option("--ess", o.ess, "equivalent sample size")->capture_default_str();
  learn->add_option("--criterion", o.criterion, "bdeu, bic or aic")->capture_default_str();
  add_search_flags(learn, o);
  add_out(learn, o);

  auto* sweep = app.add_subcommand("ess-sweep", "MAP edge count and score over an alpha grid");
  sweep->add_option("--data", o.data, "CSV file or '-'")->required();
  sweep->add_option("--alpha-min", o.alpha_min)->capture_default_str();
  sweep->add_option("--alpha-max", o.alpha_max)->capture_default_str();
  sweep->add_option("--points", o.points)->check(CLI::PositiveNumber)->capture_default_str();
  auto* lg = sweep->add_flag("--log-grid", o.log_grid, "log-spaced grid (default)");
  auto* ln = sweep->add_flag("--linear-grid", o.linear_grid, "linearly spaced grid");
  lg->excludes(ln);
  ln->excludes(lg);
  add_search_flags(sweep, o);
  add_format(sweep, o);
  add_out(sweep, o);

  auto* fig1 = app.add_subcommand("fig1", "exact and approximate log Bayes factor on the skewed pair family");
  fig1->add_option("--n", o.n, "sample size")->capture_default_str();
  fig1->add_option("--alphas", o.alphas, "comma-separated ESS values")->delimiter(',');
  fig1->add_option("--z-step", o.z_step)->capture_default_str();
  fig1->add_option("--z-max", o.z_max)->capture_default_str();
  fig1->add_flag("--integer-counts", o.integer_counts,
                 "require integral cells instead of expected counts");
  add_format(fig1, o);
  add_out(fig1, o);

  auto* opt = app.add_subcommand("optimal-ess", "coordinate ascent on (alpha, graph)");
  opt->add_option("--data", o.data, "CSV file or '-'")->required();
  opt->add_option("--max-rounds", o.max_rounds)->check(CLI::PositiveNumber)->capture_default_str();
  opt->add_option("--conv-tol", o.conv_tol)->check(CLI::PositiveNumber)->capture_default_str();
  opt->add_flag("--exact-step2", o.exact_step2, "also maximize the marginal likelihood over alpha");
  add_search_flags(opt, o);
  add_out(opt, o);

  auto* unif = app.add_subcommand("uniformity", "uniformity of the empirical p(A, B | given)");
  auto* bf = app.add_subcommand("bayes-factor", "log Bayes factor of the edge A <- B");
  for (auto* cmd : {unif, bf}) {
    cmd->add_option("--data", o.data, "CSV file or '-'")->required();
    cmd->add_option("--a", o.a)->required();
    cmd->add_option("--b", o.b)->required();
    cmd->add_option("--given", o.given, "comma-separated conditioning variables")->delimiter(',');
    add_out(cmd, o);
  }
  bf->add_option("--ess", o.ess, "equivalent sample size")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "write a built-in dataset as CSV");
  synth->add_option("--kind", o.kind, "tictac, balance, skewed, bernoulli or chain")->required();
  synth->add_option("--rows", o.rows)->capture_default_str();
  synth->add_option("--vars", o.vars)->capture_default_str();
  synth->add_option("--z", o.z, "skewed: p(X=1)")->capture_default_str();
  synth->add_option("--p", o.p, "bernoulli: p(X=1)")->capture_default_str();
  synth->add_option("--flip", o.flip, "chain: copy-error rate")->capture_default_str();
  synth->add_option("--seed", o.seed)->capture_default_str();
  add_out(synth, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score->parsed()) return cmd_score(o, score_ess->count() > 0, out, err);
    if (learn->parsed()) return cmd_learn(o, learn_ess->count() > 0, out, err);
    if (sweep->parsed()) return cmd_ess_sweep(o, out, err);
    if (fig1->parsed()) return cmd_fig1(o, out);
    if (opt->parsed()) return cmd_optimal_ess(o, out, err);
    if (unif->parsed()) return cmd_uniformity(o, out);
    if (bf->parsed()) return cmd_bayes_factor(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MissingDataError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateVariableError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace ess_sense::cli
