#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cinet/inference.hpp"
#include "cinet/model.hpp"
#include "cinet/ordering.hpp"
#include "cinet/semantics.hpp"
#include "cinet/transform.hpp"

namespace cinet {

using Json = nlohmann::json;

// Network documents: `variables`, `priors`, `tabular_families` and
// `ci_families`. Probabilities are written at full precision so that a
// document re-read yields bit-identical tables.
Json network_to_json(const Network& net);
Network network_from_json(const Json& doc);

Network read_network(const std::filesystem::path& path);
void write_network(const Network& net, const std::filesystem::path& path);

// Standalone combination function, e.g.
//   {"states": ["false", "true"], "baseline": "false", "arity": 3, "table": [...]}
struct FunctionDocument {
  std::vector<std::string> states;
  State baseline = 0;
  FunctionTable table;
};

FunctionDocument function_from_json(const Json& doc);

Json validation_to_json(const ValidationReport& report);
Json clique_report_to_json(const Network& net, const CliqueReport& report);
Json plan_to_json(const Network& net, const ExpansionPlan& plan);
Json summary_to_json(const Network& net, const SampleSummary& summary);
Json class_to_json(const InteractionClass& c, const std::vector<std::string>& states);
Json binary_table_to_json(const BinaryTable& t, const std::vector<std::string>& states);

// Rounds every floating value to 12 significant digits.
Json canonical(Json doc);
double round_significant(double value, int digits = 12);

}  // namespace cinet
