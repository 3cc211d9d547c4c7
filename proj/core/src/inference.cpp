#include "cinet/inference.hpp"

#include <algorithm>
#include <limits>

#include "cinet/error.hpp"
#include "cinet/semantics.hpp"

namespace cinet {

UndirectedGraph::UndirectedGraph(std::vector<std::size_t> weights)
    : adjacency_(weights.size()), weights_(std::move(weights)) {}

void UndirectedGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b || has_edge(a, b)) return;
  auto insert = [](std::vector<std::size_t>& list, std::size_t v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  };
  insert(adjacency_[a], b);
  insert(adjacency_[b], a);
}

bool UndirectedGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

UndirectedGraph moralize(const Network& net) {
  std::vector<std::size_t> weights(net.size());
  for (VarId v = 0; v < net.size(); ++v) weights[v] = net.cardinality(v);
  UndirectedGraph g(std::move(weights));
  for (VarId v = 0; v < net.size(); ++v) {
    const auto parents = net.parents(v);
    for (std::size_t i = 0; i < parents.size(); ++i) {
      g.add_edge(parents[i], v);
      for (std::size_t j = i + 1; j < parents.size(); ++j) g.add_edge(parents[i], parents[j]);
    }
  }
  return g;
}

Heuristic parse_heuristic(std::string_view name) {
  if (name == "min-fill") return Heuristic::MinFill;
  if (name == "min-weight") return Heuristic::MinWeight;
  throw Error("usage", "unknown heuristic '" + std::string(name) + "'");
}

Triangulation triangulate(const UndirectedGraph& graph, Heuristic heuristic,
                          std::span<const std::size_t> tie_priority) {
  const std::size_t n = graph.size();
  Triangulation out;
  out.filled = graph;
  UndirectedGraph work = graph;
  std::vector<bool> eliminated(n, false);
  auto priority = [&](std::size_t v) { return tie_priority.empty() ? v : tie_priority[v]; };

  auto live_neighbors = [&](std::size_t v) {
    std::vector<std::size_t> out_n;
    for (std::size_t u : work.neighbors(v))
      if (!eliminated[u]) out_n.push_back(u);
    return out_n;
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const auto nb = live_neighbors(v);
      double score = 0.0;
      if (heuristic == Heuristic::MinFill) {
        for (std::size_t i = 0; i < nb.size(); ++i)
          for (std::size_t j = i + 1; j < nb.size(); ++j)
            if (!work.has_edge(nb[i], nb[j])) score += 1.0;
      } else {
        score = static_cast<double>(work.weight(v));
        for (std::size_t u : nb) score *= static_cast<double>(work.weight(u));
      }
      if (score < best_score || (score == best_score && priority(v) < priority(best))) {
        best = v;
        best_score = score;
      }
    }

    const auto nb = live_neighbors(best);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!work.has_edge(nb[i], nb[j])) {
          work.add_edge(nb[i], nb[j]);
          out.filled.add_edge(nb[i], nb[j]);
          ++out.fill_edges;
        }

    std::vector<std::size_t> clique = nb;
    clique.push_back(best);
    std::sort(clique.begin(), clique.end());
    const bool contained = std::any_of(out.cliques.begin(), out.cliques.end(), [&](const auto& c) {
      return std::includes(c.begin(), c.end(), clique.begin(), clique.end());
    });
    if (!contained) out.cliques.push_back(std::move(clique));
    eliminated[best] = true;
    out.order.push_back(best);
  }
  return out;
}

std::uint64_t clique_weight(const Network& net, std::span<const VarId> clique) {
  std::uint64_t w = 1;
  for (VarId v : clique) w *= net.cardinality(v);
  return w;
}

CliqueReport clique_stats(const Network& net, Heuristic heuristic) {
  const Triangulation tri = triangulate(moralize(net), heuristic);
  CliqueReport report;
  report.elimination_order = tri.order;
  for (const auto& c : tri.cliques) {
    const std::uint64_t w = clique_weight(net, c);
    report.largest = std::max(report.largest, w);
    report.total += w;
    report.cliques.push_back(c);
  }
  return report;
}

Factor Factor::from_cpd(const Network& net, const TabularCPD& cpd) {
  Factor f;
  f.scope = cpd.parents;
  f.scope.push_back(cpd.child);
  for (VarId v : f.scope) f.cards.push_back(net.cardinality(v));
  f.values = cpd.table;
  return f;
}

namespace {

// Position of each scope variable's digit inside a flat index.
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> s(cards.size());
  std::size_t stride = 1;
  for (std::size_t i = cards.size(); i-- > 0;) {
    s[i] = stride;
    stride *= cards[i];
  }
  return s;
}

}  // namespace

Factor Factor::multiply(const Factor& other) const {
  Factor out;
  out.scope = scope;
  out.cards = cards;
  for (std::size_t i = 0; i < other.scope.size(); ++i) {
    if (std::find(out.scope.begin(), out.scope.end(), other.scope[i]) == out.scope.end()) {
      out.scope.push_back(other.scope[i]);
      out.cards.push_back(other.cards[i]);
    }
  }
  std::size_t total = 1;
  for (std::size_t c : out.cards) total *= c;
  out.values.assign(total, 0.0);

  // Stride of each output digit in the two inputs (0 when absent).
  const auto self_strides = strides_of(cards);
  const auto other_strides = strides_of(other.cards);
  std::vector<std::size_t> in_self(out.scope.size(), 0), in_other(out.scope.size(), 0);
  for (std::size_t d = 0; d < out.scope.size(); ++d) {
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (scope[i] == out.scope[d]) in_self[d] = self_strides[i];
    for (std::size_t i = 0; i < other.scope.size(); ++i)
      if (other.scope[i] == out.scope[d]) in_other[d] = other_strides[i];
  }

  std::vector<std::size_t> digit(out.scope.size(), 0);
  std::size_t a = 0, b = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    out.values[idx] = values[a] * other.values[b];
    for (std::size_t d = out.scope.size(); d-- > 0;) {
      if (++digit[d] < out.cards[d]) {
        a += in_self[d];
        b += in_other[d];
        break;
      }
      a -= in_self[d] * (out.cards[d] - 1);
      b -= in_other[d] * (out.cards[d] - 1);
      digit[d] = 0;
    }
  }
  return out;
}

Factor Factor::sum_out(VarId v) const {
  const auto pos = std::find(scope.begin(), scope.end(), v);
  if (pos == scope.end()) return *this;
  const std::size_t at = static_cast<std::size_t>(pos - scope.begin());
  Factor out;
  for (std::size_t i = 0; i < scope.size(); ++i)
    if (i != at) {
      out.scope.push_back(scope[i]);
      out.cards.push_back(cards[i]);
    }
  std::size_t inner = 1;
  for (std::size_t i = at + 1; i < cards.size(); ++i) inner *= cards[i];
  const std::size_t outer = values.size() / (inner * cards[at]);
  out.values.assign(outer * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < cards[at]; ++s)
      for (std::size_t i = 0; i < inner; ++i)
        out.values[o * inner + i] += values[(o * cards[at] + s) * inner + i];
  return out;
}

Factor Factor::reduce(VarId v, State state) const {
  const auto pos = std::find(scope.begin(), scope.end(), v);
  if (pos == scope.end()) return *this;
  const std::size_t at = static_cast<std::size_t>(pos - scope.begin());
  Factor out;
  for (std::size_t i = 0; i < scope.size(); ++i)
    if (i != at) {
      out.scope.push_back(scope[i]);
      out.cards.push_back(cards[i]);
    }
  std::size_t inner = 1;
  for (std::size_t i = at + 1; i < cards.size(); ++i) inner *= cards[i];
  const std::size_t outer = values.size() / (inner * cards[at]);
  out.values.resize(outer * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i)
      out.values[o * inner + i] = values[(o * cards[at] + state) * inner + i];
  return out;
}

Network expand_all(const Network& net) {
  Network out = net;
  for (VarId v : net.ci_effects()) out.set_family(v, expand_to_cpd(net, *net.ci_family(v)));
  return out;
}

std::vector<double> posterior(const Network& net, const Evidence& evidence, VarId query,
                              Heuristic heuristic) {
  require_valid(net);
  if (query >= net.size()) throw Error("unknown_variable", "query variable out of range");
  for (const auto& [v, s] : evidence)
    if (v >= net.size() || s >= net.cardinality(v))
      throw Error("invalid_evidence", "evidence names an unknown variable or state");

  const Network flat = expand_all(net);
  std::vector<Factor> factors;
  for (VarId v = 0; v < flat.size(); ++v) {
    Factor f = Factor::from_cpd(flat, *flat.tabular(v));
    for (const auto& [ev, s] : evidence) f = f.reduce(ev, s);
    factors.push_back(std::move(f));
  }

  // Evidence variables are already reduced away; eliminate the rest along
  // the triangulation order, keeping the query.
  const Triangulation tri = triangulate(moralize(flat), heuristic);
  for (VarId v : tri.order) {
    if (v == query || evidence.count(v)) continue;
    std::vector<Factor> keep;
    Factor product{{}, {}, {1.0}};
    bool touched = false;
    for (auto& f : factors) {
      if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end()) {
        product = product.multiply(f);
        touched = true;
      } else {
        keep.push_back(std::move(f));
      }
    }
    if (touched) keep.push_back(product.sum_out(v));
    factors = std::move(keep);
  }

  Factor joint{{}, {}, {1.0}};
  for (const auto& f : factors) joint = joint.multiply(f);

  const std::size_t k = net.cardinality(query);
  std::vector<double> dist(k, 0.0);
  if (auto it = evidence.find(query); it != evidence.end()) {
    // Query observed: joint is a scalar, p(evidence).
    if (!(joint.values[0] > kEvidenceFloor))
      throw Error("inconsistent_evidence", "evidence has zero probability");
    dist[it->second] = 1.0;
    return dist;
  }
  for (std::size_t s = 0; s < k; ++s) dist[s] = joint.values[s];
  double z = 0.0;
  for (double p : dist) z += p;
  if (!(z > kEvidenceFloor)) throw Error("inconsistent_evidence", "evidence has zero probability");
  for (double& p : dist) p /= z;
  return dist;
}

}  // namespace cinet
