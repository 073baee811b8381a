#include <benchmark/benchmark.h>

#include "wordpuzzle/consistency.hpp"
#include "wordpuzzle/rng.hpp"

using namespace wordpuzzle;

namespace {

WeightedGraph random_graph(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  WeightedGraph g;
  g.weights = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g.nodes.push_back(static_cast<WordId>(i));
    for (Eigen::Index j = i + 1; j < n; ++j) g.weights(i, j) = g.weights(j, i) = rng.uniform();
  }
  return g;
}

void BM_BottleneckScore(benchmark::State& state) {
  const auto g = random_graph(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(bottleneck_score(g));
}
BENCHMARK(BM_BottleneckScore)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_WidestPath(benchmark::State& state) {
  const auto g = random_graph(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(widest_path_sim(g, 0, 1));
}
BENCHMARK(BM_WidestPath)->Arg(4)->Arg(7)->Arg(10);

}  // namespace
