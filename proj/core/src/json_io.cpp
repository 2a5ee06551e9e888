#include "ess_sense/json_io.hpp"

#include "ess_sense/errors.hpp"

namespace ess_sense {

using nlohmann::json;

namespace {

int node_index(const Dataset& d, const std::string& name, const std::string& where) {
  for (int i = 0; i < d.num_vars(); ++i) {
    if (d.variable(i).name == name) return i;
  }
  throw ParseError(where + ": unknown node '" + name + "'");
}

}  // namespace

Dag dag_from_json(const json& j, const Dataset& d) {
  if (!j.is_object()) throw ParseError("graph JSON must be an object");
  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    throw ParseError("key 'nodes' is missing or not an array");
  }
  const auto& nodes = j["nodes"];
  if (nodes.size() != static_cast<std::size_t>(d.num_vars())) {
    throw ParseError("key 'nodes' lists " + std::to_string(nodes.size()) + " nodes but the data has " +
                     std::to_string(d.num_vars()) + " variables");
  }
  std::vector<bool> listed(static_cast<std::size_t>(d.num_vars()), false);
  for (const auto& n : nodes) {
    if (!n.is_string()) throw ParseError("key 'nodes' must contain strings");
    const int idx = node_index(d, n.get<std::string>(), "nodes");
    if (listed[static_cast<std::size_t>(idx)]) throw ParseError("key 'nodes' repeats '" + n.get<std::string>() + "'");
    listed[static_cast<std::size_t>(idx)] = true;
  }
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(d.num_vars()));
  if (j.contains("parents")) {
    if (!j["parents"].is_object()) throw ParseError("key 'parents' must be an object");
    for (const auto& [child, list] : j["parents"].items()) {
      const std::string where = "parents." + child;
      const int c = node_index(d, child, where);
      if (!list.is_array()) throw ParseError("key '" + where + "' must be an array");
      for (const auto& p : list) {
        if (!p.is_string()) throw ParseError("key '" + where + "' must contain strings");
        parents[static_cast<std::size_t>(c)].push_back(node_index(d, p.get<std::string>(), where));
      }
    }
  }
  try {
    return Dag(std::move(parents));
  } catch (const DomainError& e) {
    throw ParseError(std::string("key 'parents': ") + e.what());
  }
}

Dag dag_from_json_text(const std::string& text, const Dataset& d) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
  return dag_from_json(j, d);
}

json dag_to_json(const Dag& g, const Dataset& d) {
  json out;
  out["nodes"] = json::array();
  out["parents"] = json::object();
  for (int i = 0; i < g.size(); ++i) {
    const auto& name = d.variable(i).name;
    out["nodes"].push_back(name);
    json ps = json::array();
    for (int p : g.parents(i)) ps.push_back(d.variable(p).name);
    out["parents"][name] = std::move(ps);
  }
  return out;
}

json score_to_json(const ScoreBreakdown& s, const Dataset& d) {
  json out;
  out["total"] = s.total;
  out["per_family"] = json::object();
  for (std::size_t i = 0; i < s.per_family.size(); ++i) {
    out["per_family"][d.variable(static_cast<int>(i)).name] = s.per_family[i];
  }
  return out;
}

json search_result_to_json(const SearchResult& r, const Dataset& d) {
  json out;
  out["dag"] = dag_to_json(r.dag, d);
  out["score"] = r.score;
  out["method"] = to_string(r.method);
  out["edges"] = r.dag.num_edges();
  out["stats"] = {{"candidates", r.stats.candidates},
                  {"omitted", r.stats.omitted},
                  {"iterations", r.stats.iterations}};
  return out;
}

json uniformity_to_json(const UniformityReport& r) {
  return json{{"u", r.u}, {"per_pi", r.per_pi}};
}

json bf_result_to_json(const BfResult& r) {
  json out{{"exact_log_bf", r.exact_log_bf}, {"n", r.n},     {"alpha", r.alpha},
           {"d_f", r.d_f},                   {"u", r.u}};
  out["approx_log_bf"] = r.approx_log_bf ? json(*r.approx_log_bf) : json(nullptr);
  return out;
}

json estimate_to_json(const EssEstimate& e) {
  return json{{"alpha_star", e.alpha_star},
              {"numerator", e.numerator},
              {"denom", e.denom},
              {"expect_empirical", e.expect_empirical},
              {"expect_prior", e.expect_prior},
              {"entropy_gap", e.entropy_gap},
              {"kl", e.kl},
              {"empty_model", e.empty_model}};
}

json ascent_trace_to_json(const AscentTrace& t, const Dataset& d) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    rounds.push_back(json{{"k", r.k},
                          {"alpha", r.alpha},
                          {"edges", r.dag.num_edges()},
                          {"score", r.score},
                          {"dag", dag_to_json(r.dag, d)},
                          {"estimate", estimate_to_json(r.estimate)}});
  }
  json out{{"rounds", std::move(rounds)},
           {"converged", t.converged},
           {"k", t.rounds.empty() ? 0 : t.rounds.back().k},
           {"final_alpha", t.final_alpha},
           {"final_dag", dag_to_json(t.final_dag, d)}};
  out["exact_step2_alpha"] = t.exact_step2_alpha ? json(*t.exact_step2_alpha) : json(nullptr);
  return out;
}

}  // namespace ess_sense
