#pragma once

// JSON forms of the library types. Servers and jobs are 1-based on the wire;
// ratios are "p/q" strings. Parsers throw InputError on malformed input.

#include "lbgame/analysis.hpp"
#include "lbgame/coalition.hpp"
#include "lbgame/deviation_graph.hpp"
#include "lbgame/experiments.hpp"
#include "lbgame/game.hpp"
#include "lbgame/tilde.hpp"

#include <json.hpp>

namespace lbg {

using Json = nlohmann::ordered_json;

/// Parses text, converting parse errors to InputError.
Json parse_json(const std::string& text);

Json to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json to_json(const Assignment& assignment);
Assignment assignment_from_json(const Instance& instance, const Json& j);

Json to_json(const Deviation& deviation);
Deviation deviation_from_json(const Json& j);

Json to_json(const Ratio& r);
Ratio ratio_from_json(const Json& j);

Json to_json(const DeviationReport& report);
DeviationReport report_from_json(const Json& j);

Json to_json(const NashWitness& witness);
Json to_json(const WorstDeviation& worst);
Json to_json(const CheckList& checks);

Json to_json(const DeviationGraph& graph);
Json to_json(const DeviationGraph& graph, const TildeClassification& cls);
Json to_json(const DeviationGraph& graph, const InequalityReport& report);
Json to_json(const DeviationAnalysis& analysis);
Json to_json(const EquilibriumAnalysis& analysis);

SweepConfig sweep_config_from_json(const Json& j);
Json to_json(const SweepConfig& config);
Json summary_json(const SweepReport& report);

} // namespace lbg
