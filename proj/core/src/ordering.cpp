#include "cinet/ordering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "cinet/error.hpp"

namespace cinet {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t range = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = range - range % bound;
  std::uint64_t draw;
  do draw = rng();
  while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

bool better_sample(const OrderingSample& a, const OrderingSample& b) {
  return std::tie(a.report.total, a.report.largest, a.plan) <
         std::tie(b.report.total, b.report.largest, b.plan);
}

namespace {

void require_families(const Network& net) {
  if (net.ci_effects().empty())
    throw Error("no_ci_families", "network has no causal-independence families");
}

OrderingSample measure(const Network& net, ExpansionPlan plan) {
  OrderingSample s;
  s.report = clique_stats(transform_network(net, plan));
  s.plan = std::move(plan);
  return s;
}

}  // namespace

SampleSummary sample_orderings(const Network& net, std::size_t k, std::uint64_t seed) {
  require_valid(net);
  require_families(net);
  if (k == 0) throw Error("invalid_argument", "sample count must be positive");

  std::mt19937_64 rng(seed);
  const ExpansionPlan base = declaration_plan(net, ExpansionStyle::Collapsed);
  std::vector<OrderingSample> samples;
  samples.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    ExpansionPlan plan = base;
    for (auto& entry : plan.entries)
      for (std::size_t j = entry.ordering.size(); j-- > 1;)
        std::swap(entry.ordering[j], entry.ordering[uniform_index(rng, j + 1)]);
    samples.push_back(measure(net, std::move(plan)));
  }

  SampleSummary out;
  out.count = k;
  out.min_total = std::numeric_limits<std::uint64_t>::max();
  out.min_largest = std::numeric_limits<std::uint64_t>::max();
  double sum = 0.0;
  const OrderingSample* best = &samples.front();
  for (const auto& s : samples) {
    out.min_total = std::min(out.min_total, s.report.total);
    out.max_total = std::max(out.max_total, s.report.total);
    out.min_largest = std::min(out.min_largest, s.report.largest);
    out.max_largest = std::max(out.max_largest, s.report.largest);
    sum += static_cast<double>(s.report.total);
    if (better_sample(s, *best)) best = &s;
  }
  out.mean_total = sum / static_cast<double>(k);
  out.best = *best;

  const double lo = static_cast<double>(out.min_total);
  const double hi = static_cast<double>(out.max_total);
  if (out.min_total == out.max_total) {
    out.histogram.push_back({lo, hi, k});
  } else {
    const double width = (hi - lo) / kHistogramBuckets;
    for (std::size_t b = 0; b < kHistogramBuckets; ++b)
      out.histogram.push_back({lo + b * width, b + 1 == kHistogramBuckets ? hi : lo + (b + 1) * width, 0});
    for (const auto& s : samples) {
      auto b = static_cast<std::size_t>((static_cast<double>(s.report.total) - lo) / width);
      ++out.histogram[std::min(b, kHistogramBuckets - 1)].count;
    }
  }
  return out;
}

namespace {

// Interaction graph before expansion: tabular families are married, CI
// families only connect each cause to the effect because the chain removes
// the cause-cause clique.
UndirectedGraph search_graph(const Network& net) {
  std::vector<std::size_t> weights(net.size());
  for (VarId v = 0; v < net.size(); ++v) weights[v] = net.cardinality(v);
  UndirectedGraph g(std::move(weights));
  for (VarId v = 0; v < net.size(); ++v) {
    const auto parents = net.parents(v);
    const bool marry = net.ci_family(v) == nullptr;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      g.add_edge(parents[i], v);
      if (marry)
        for (std::size_t j = i + 1; j < parents.size(); ++j) g.add_edge(parents[i], parents[j]);
    }
  }
  return g;
}

ExpansionPlan plan_by_elimination(const Network& net, const UndirectedGraph& graph,
                                  std::span<const std::size_t> priority) {
  const std::size_t n = graph.size();
  UndirectedGraph work = graph;
  std::vector<bool> eliminated(n, false);
  std::vector<std::optional<PlanEntry>> planned(n);
  const auto effects = net.ci_effects();

  auto live_degree = [&](std::size_t v) {
    std::size_t d = 0;
    for (std::size_t u : work.neighbors(v))
      if (!eliminated[u]) ++d;
    return d;
  };
  auto live_neighbors = [&](std::size_t v) {
    std::vector<std::size_t> out;
    for (std::size_t u : work.neighbors(v))
      if (!eliminated[u]) out.push_back(u);
    return out;
  };

  auto plan_family = [&](VarId effect) {
    const CIFamily& fam = *net.ci_family(effect);
    PlanEntry entry{effect, std::vector<std::size_t>(fam.links.size()), ExpansionStyle::Collapsed};
    std::iota(entry.ordering.begin(), entry.ordering.end(), 0);
    std::vector<std::size_t> degree(fam.links.size());
    for (std::size_t i = 0; i < fam.links.size(); ++i) {
      const VarId c = fam.links[i].cause;
      degree[i] = eliminated[c] ? 0 : live_degree(c);
    }
    std::stable_sort(entry.ordering.begin(), entry.ordering.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(degree[a], fam.links[a].cause) < std::tie(degree[b], fam.links[b].cause);
    });
    planned[effect] = std::move(entry);
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const auto nb = live_neighbors(v);
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!work.has_edge(nb[i], nb[j])) ++fill;
      if (fill < best_fill || (fill == best_fill && priority[v] < priority[best])) {
        best = v;
        best_fill = fill;
      }
    }
    for (VarId e : effects) {
      if (planned[e]) continue;
      const auto causes = net.ci_family(e)->causes();
      if (best == e || std::find(causes.begin(), causes.end(), best) != causes.end())
        plan_family(e);
    }
    const auto nb = live_neighbors(best);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) work.add_edge(nb[i], nb[j]);
    eliminated[best] = true;
  }

  ExpansionPlan plan;
  for (VarId e : effects) plan.entries.push_back(*planned[e]);
  return plan;
}

}  // namespace

OrderingSample greedy_search(const Network& net, std::size_t restarts, std::uint64_t seed) {
  require_valid(net);
  require_families(net);
  const UndirectedGraph graph = search_graph(net);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> priority(net.size());
  std::iota(priority.begin(), priority.end(), 0);

  std::optional<OrderingSample> best;
  const std::size_t rounds = std::max<std::size_t>(restarts, 1);
  for (std::size_t r = 0; r < rounds; ++r) {
    if (r > 0)
      for (std::size_t j = priority.size(); j-- > 1;)
        std::swap(priority[j], priority[uniform_index(rng, j + 1)]);
    OrderingSample candidate = measure(net, plan_by_elimination(net, graph, priority));
    if (!best || better_sample(candidate, *best)) best = std::move(candidate);
  }
  return *best;
}

}  // namespace cinet
