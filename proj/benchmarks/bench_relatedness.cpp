#include <benchmark/benchmark.h>

#include <memory>

#include "wordpuzzle/esa.hpp"
#include "wordpuzzle/rng.hpp"
#include "wordpuzzle/synthetic.hpp"

using namespace wordpuzzle;

namespace {

std::shared_ptr<const EsaIndex> index() {
  static const auto idx = [] {
    const auto planted = generate_planted_corpus({});
    return std::make_shared<const EsaIndex>(build_esa_index(generate_concept_corpus(planted, {})));
  }();
  return idx;
}

void BM_Cosine(benchmark::State& state) {
  const auto idx = index();
  Rng rng(3);
  for (auto _ : state) {
    const auto a = static_cast<std::uint32_t>(rng.below(idx->size()));
    const auto b = static_cast<std::uint32_t>(rng.below(idx->size()));
    benchmark::DoNotOptimize(idx->cosine(a, b));
  }
}
BENCHMARK(BM_Cosine);

void BM_MemoizedRelatedness(benchmark::State& state) {
  const auto idx = index();
  const std::vector<std::string> vocab(idx->words().begin(), idx->words().end());
  const EsaSimilarity sim(idx, vocab, static_cast<std::size_t>(state.range(0)));
  Rng rng(4);
  for (auto _ : state) {
    const auto a = static_cast<WordId>(rng.below(vocab.size()));
    const auto b = static_cast<WordId>(rng.below(vocab.size()));
    benchmark::DoNotOptimize(sim.relatedness(a, b));
  }
}
BENCHMARK(BM_MemoizedRelatedness)->Arg(0)->Arg(4096);

void BM_BuildIndex(benchmark::State& state) {
  const auto planted = generate_planted_corpus({});
  const auto concepts = generate_concept_corpus(planted, {});
  for (auto _ : state) benchmark::DoNotOptimize(build_esa_index(concepts));
}
BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);

}  // namespace
