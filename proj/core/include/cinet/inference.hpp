#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cinet/model.hpp"

namespace cinet {

// Undirected graph over network variables. `weights` holds the state-space
// size of each vertex and drives the min-weight heuristic.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::vector<std::size_t> weights);

  std::size_t size() const { return adjacency_.size(); }
  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t weight(std::size_t v) const { return weights_[v]; }
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;  // sorted
  std::vector<std::size_t> weights_;
};

UndirectedGraph moralize(const Network& net);

enum class Heuristic { MinFill, MinWeight };

Heuristic parse_heuristic(std::string_view name);

struct Triangulation {
  UndirectedGraph filled;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> cliques;  // maximal cliques, discovery order
  std::size_t fill_edges = 0;
};

// Greedy elimination; ties go to the lowest vertex index unless a priority
// permutation is supplied (lower priority value wins ties).
Triangulation triangulate(const UndirectedGraph& graph, Heuristic heuristic = Heuristic::MinFill,
                          std::span<const std::size_t> tie_priority = {});

struct CliqueReport {
  std::vector<std::vector<VarId>> cliques;
  std::uint64_t largest = 0;
  std::uint64_t total = 0;
  std::vector<VarId> elimination_order;
};

CliqueReport clique_stats(const Network& net, Heuristic heuristic = Heuristic::MinFill);
std::uint64_t clique_weight(const Network& net, std::span<const VarId> clique);

// Table over the joint states of `scope`, last variable varying fastest.
struct Factor {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  static Factor from_cpd(const Network& net, const TabularCPD& cpd);
  Factor multiply(const Factor& other) const;
  Factor sum_out(VarId v) const;
  Factor reduce(VarId v, State s) const;
};

using Evidence = std::map<VarId, State>;

// Exact p(query | evidence) by variable elimination. CI families are expanded
// to tables first. Throws Error("inconsistent_evidence") on zero-probability
// evidence.
std::vector<double> posterior(const Network& net, const Evidence& evidence, VarId query,
                              Heuristic heuristic = Heuristic::MinFill);

// Same network with every CI family replaced by its exact table.
Network expand_all(const Network& net);

inline constexpr double kEvidenceFloor = 1e-300;

}  // namespace cinet
