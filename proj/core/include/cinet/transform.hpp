#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cinet/model.hpp"

namespace cinet {

enum class ExpansionStyle {
  Collapsed,        // probabilistic cause summaries e'_i, deterministic chain
  ExplicitEpsilon,  // mechanism roots eps_i, deterministic e'_i = g(c_i, eps_i)
  TemporalChain,    // chain nodes e_i with parents (c_i, e_{i-1}), no e'_i
};

ExpansionStyle parse_style(std::string_view name);
std::string style_name(ExpansionStyle style);

struct PlanEntry {
  VarId effect = 0;
  std::vector<std::size_t> ordering;  // permutation of the family's link indices
  ExpansionStyle style = ExpansionStyle::Collapsed;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
  friend auto operator<=>(const PlanEntry&, const PlanEntry&) = default;
};

struct ExpansionPlan {
  std::vector<PlanEntry> entries;

  friend bool operator==(const ExpansionPlan&, const ExpansionPlan&) = default;
  friend auto operator<=>(const ExpansionPlan&, const ExpansionPlan&) = default;
};

// Every CI family, links in declaration order.
ExpansionPlan declaration_plan(const Network& net, ExpansionStyle style);

// Names of the auxiliary nodes created for an effect.
std::string chain_node_name(std::string_view effect, std::size_t position);
std::string summary_node_name(std::string_view effect, std::size_t position);
std::string mechanism_node_name(std::string_view effect, std::size_t position);

// Replaces the CI family of `entry.effect` by an explicit chain of two-parent
// nodes. Throws Error("not_decomposable") when the combiner has no nested
// decomposition along the requested ordering and Error("name_collision") when
// the auxiliary names are taken.
Network expand_family(const Network& net, const PlanEntry& entry);

Network transform_network(const Network& net, const ExpansionPlan& plan);

}  // namespace cinet
