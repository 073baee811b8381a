#include <benchmark/benchmark.h>

#include "wordpuzzle/synthetic.hpp"
#include "wordpuzzle/topic_models.hpp"

using namespace wordpuzzle;

namespace {

const DocTermMatrix& planted_matrix() {
  static const DocTermMatrix x = [] {
    const auto planted = generate_planted_corpus({});
    const auto vocab = build_vocabulary(planted.documents, {});
    return build_doc_term_matrix(planted.documents, vocab);
  }();
  return x;
}

void BM_LdaSweep(benchmark::State& state) {
  LdaConfig cfg;
  cfg.topics = static_cast<std::size_t>(state.range(0));
  LdaGibbsSampler sampler(planted_matrix(), cfg);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sampler.token_count()));
}
BENCHMARK(BM_LdaSweep)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LsaFit(benchmark::State& state) {
  LsaConfig cfg;
  cfg.topics = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lsa_fit(planted_matrix(), cfg));
}
BENCHMARK(BM_LsaFit)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SparseCode(benchmark::State& state) {
  Rng rng(5);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXd d(n, 16);
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < n; ++i) d(i, j) = rng.normal();
  d.colwise().normalize();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
  const SparseCoder coder(d, 0.1, {});
  for (auto _ : state) benchmark::DoNotOptimize(coder.encode(x));
}
BENCHMARK(BM_SparseCode)->Arg(80)->Arg(1000);

void BM_DictLearnEpoch(benchmark::State& state) {
  DictLearnConfig cfg;
  cfg.topics = 8;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(dict_learn_fit(planted_matrix(), cfg));
}
BENCHMARK(BM_DictLearnEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
