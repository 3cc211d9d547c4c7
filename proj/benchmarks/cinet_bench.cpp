#include <benchmark/benchmark.h>

#include "cinet/generators.hpp"
#include "cinet/inference.hpp"
#include "cinet/ordering.hpp"
#include "cinet/semantics.hpp"
#include "cinet/transform.hpp"

namespace {

using namespace cinet;

void BM_CliqueStatsUntransformed(benchmark::State& state) {
  const Network net = make_bn2(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(clique_stats(net).total);
}
BENCHMARK(BM_CliqueStatsUntransformed)->Arg(2)->Arg(5);

void BM_TransformAndStats(benchmark::State& state) {
  const Network net = make_bn2(state.range(0));
  const ExpansionPlan plan = declaration_plan(net, static_cast<ExpansionStyle>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(clique_stats(transform_network(net, plan)).total);
}
BENCHMARK(BM_TransformAndStats)->ArgsProduct({{2, 5}, {0, 1, 2}});

void BM_ExpandToCpd(benchmark::State& state) {
  const Network net = make_bn2(state.range(0));
  const CIFamily& fam = *net.ci_family(10);
  for (auto _ : state) benchmark::DoNotOptimize(expand_to_cpd(net, fam).table.data());
}
BENCHMARK(BM_ExpandToCpd)->Arg(2)->Arg(3)->Arg(5);

void BM_Posterior(benchmark::State& state) {
  const Network net = make_bn2(state.range(0));
  const Evidence evidence{{10, 1}, {12, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(posterior(net, evidence, 8).data());
}
BENCHMARK(BM_Posterior)->Arg(2)->Arg(5);

void BM_ClassifyOr(benchmark::State& state) {
  const std::size_t n = state.range(0);
  FunctionTable f{2, n, std::vector<State>(std::size_t{1} << n, 1)};
  f.cells[0] = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify(f, 0).number());
}
BENCHMARK(BM_ClassifyOr)->DenseRange(3, 10);

void BM_SampleOrderings(benchmark::State& state) {
  const Network net = make_bn2(5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_orderings(net, state.range(0), 1994).mean_total);
}
BENCHMARK(BM_SampleOrderings)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GreedySearch(benchmark::State& state) {
  const Network net = make_bn2(5);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_search(net, state.range(0), 1994).report.total);
}
BENCHMARK(BM_GreedySearch)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
