#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "ess_sense/bayes_factor.hpp"
#include "ess_sense/dag.hpp"
#include "ess_sense/dataset.hpp"
#include "ess_sense/ess.hpp"
#include "ess_sense/scores.hpp"
#include "ess_sense/search.hpp"
#include "ess_sense/uniformity.hpp"

namespace ess_sense {

// {"nodes": [names...], "parents": {name: [names...]}}. Nodes missing from
// "parents" have no parents. Node names must match the dataset's variables;
// throws ParseError naming the offending key otherwise.
Dag dag_from_json(const nlohmann::json& j, const Dataset& d);
Dag dag_from_json_text(const std::string& text, const Dataset& d);
nlohmann::json dag_to_json(const Dag& g, const Dataset& d);

// {"total": float, "per_family": {name: float}}
nlohmann::json score_to_json(const ScoreBreakdown& s, const Dataset& d);

nlohmann::json search_result_to_json(const SearchResult& r, const Dataset& d);
nlohmann::json uniformity_to_json(const UniformityReport& r);
nlohmann::json bf_result_to_json(const BfResult& r);
nlohmann::json estimate_to_json(const EssEstimate& e);
nlohmann::json ascent_trace_to_json(const AscentTrace& t, const Dataset& d);

}  // namespace ess_sense
