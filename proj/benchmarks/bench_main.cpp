#include <benchmark/benchmark.h>

#include <random>

#include "smellcast/classifier.hpp"
#include "smellcast/dataset.hpp"
#include "smellcast/features.hpp"
#include "smellcast/smells.hpp"

using namespace smellcast;

namespace {

DependencyGraph random_graph(std::size_t n, std::size_t edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back("pkg" + std::to_string(1000 + i));
  std::vector<Edge> e;
  while (e.size() < edges) {
    auto a = pick(rng), b = pick(rng);
    if (a != b) e.push_back({nodes[a], nodes[b]});
  }
  return DependencyGraph("bench", nodes, e);
}

void BM_TopoAllPairs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, 9 * n, 1);
  std::array<double, kTopologicalFeatureCount> out{};
  for (auto _ : state) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v) {
          topo_features_into(g, u, v, out);
          benchmark::DoNotOptimize(out);
        }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1)));
}
BENCHMARK(BM_TopoAllPairs)->Arg(50)->Arg(100)->Arg(200);

void BM_DetectCycles(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, static_cast<std::size_t>(1.6 * static_cast<double>(n)), 2);
  for (auto _ : state) {
    auto r = detect_cycles(g, kDefaultCycleCap);
    benchmark::DoNotOptimize(r.count);
  }
}
BENCHMARK(BM_DetectCycles)->Arg(20)->Arg(40)->Arg(80);

void BM_DetectCyclesCapped(benchmark::State& state) {
  const auto g = random_graph(100, 900, 3);
  for (auto _ : state) {
    auto r = detect_cycles(g, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(r.count);
  }
}
BENCHMARK(BM_DetectCyclesCapped)->Arg(1000)->Arg(10000);

void BM_BuildTrainingSet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto prev = random_graph(n, 8 * n, 4);
  const auto curr = random_graph(n, 9 * n, 4);
  for (auto _ : state) {
    auto ds = build_training_set(prev, curr, nullptr, {false, true});
    benchmark::DoNotOptimize(ds.instances.data());
  }
}
BENCHMARK(BM_BuildTrainingSet)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  const auto prev = random_graph(100, 860, 5);
  const auto ds = build_training_set(prev, random_graph(100, 900, 5), nullptr, {false, true});
  TrainConfig cfg;
  cfg.max_iters = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto m = train(ds, cfg);
    benchmark::DoNotOptimize(m.bias);
  }
}
BENCHMARK(BM_Train)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
