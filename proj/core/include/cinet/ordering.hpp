#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cinet/inference.hpp"
#include "cinet/transform.hpp"

namespace cinet {

struct OrderingSample {
  ExpansionPlan plan;
  CliqueReport report;
};

struct HistogramBucket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct SampleSummary {
  std::size_t count = 0;
  std::uint64_t min_total = 0;
  std::uint64_t max_total = 0;
  double mean_total = 0.0;
  std::uint64_t min_largest = 0;
  std::uint64_t max_largest = 0;
  std::vector<HistogramBucket> histogram;
  OrderingSample best;

  // min_total / mean_total; how much the best sampled ordering gains.
  double gain_ratio() const { return mean_total > 0.0 ? min_total / mean_total : 1.0; }
};

inline constexpr std::size_t kHistogramBuckets = 20;

// Plans compare by total clique size, then largest clique, then plan.
bool better_sample(const OrderingSample& a, const OrderingSample& b);

// k uniformly random per-family orderings (Collapsed style), each measured
// with clique_stats. Deterministic for a given seed.
SampleSummary sample_orderings(const Network& net, std::size_t k, std::uint64_t seed);

// Min-fill elimination that fixes each family's chain ordering when the
// elimination first reaches the family, ordering causes by their degree at
// that moment. Restart 0 uses variable-index tie-breaking; the others use
// seeded random priorities.
OrderingSample greedy_search(const Network& net, std::size_t restarts, std::uint64_t seed);

// Unbiased integer in [0, bound) from a 64-bit engine.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound);

}  // namespace cinet
