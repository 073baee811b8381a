#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordpuzzle/consistency.hpp"
#include "wordpuzzle/corpus.hpp"
#include "wordpuzzle/esa.hpp"
#include "wordpuzzle/puzzles.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

namespace fs = std::filesystem;

// Each stage below reads and writes files so that it can be driven from the
// command line; all of them are deterministic functions of their options.

struct IngestOptions {
  fs::path corpus;
  fs::path output;
  VocabularyFilter filter;
  TokenizerConfig tokenizer;
  bool tfidf = false;
};

struct IngestReport {
  std::size_t documents = 0;
  std::size_t vocabulary = 0;
  std::vector<std::string> dropped_ids;
  CorpusMatrix corpus;
};

IngestReport run_ingest(const IngestOptions& options);

/// Settings shared by every topic model plus the per-model knobs.
struct ModelSettings {
  std::size_t topics = 400;
  std::uint64_t seed = 0;
  LsaConfig lsa;
  LdaConfig lda;
  DictLearnConfig dictlearn;
};

TopicDictionary fit_model(ModelKind kind, const DocTermMatrix& x, const ModelSettings& settings);

struct TrainOptions {
  ModelKind model = ModelKind::lda;
  fs::path matrix;
  fs::path output;
  ModelSettings settings;
};

TopicDictionary run_train(const TrainOptions& options);

struct IndexOptions {
  fs::path concepts;
  fs::path output;
  EsaConfig esa;
};

EsaIndex run_index(const IndexOptions& options);

struct ExtractOptions {
  fs::path model;
  fs::path index;
  fs::path output;
  std::size_t k = 4;
  double delta = 0.1;
};

std::vector<ConsistentSet> run_extract_sets(const ExtractOptions& options);

struct GenerateOptions {
  fs::path sets;
  fs::path index;
  /// When set, mixed-in words come from this corpus vocabulary instead of
  /// the whole ESA index.
  std::optional<fs::path> matrix;
  fs::path output;
  std::optional<fs::path> output_without_solutions;
  BankConfig bank;
  /// Draw mixed-in words in proportion to corpus frequency (needs `matrix`).
  bool frequency_weighted = false;
};

/// Generates and re-verifies the bank; throws InvariantError if any emitted
/// puzzle fails verification.
PuzzleBank run_generate(const GenerateOptions& options);

/// Consistent-set counts per model over a threshold grid. A set counts at
/// delta when its bottleneck score is strictly greater than delta.
struct YieldCurve {
  std::vector<double> deltas;
  std::vector<std::string> models;
  /// counts[m][d] for models[m], deltas[d].
  std::vector<std::vector<std::size_t>> counts;

  bool monotone() const;
};

/// Fits each model, scores its top-k sets once, then counts per threshold.
/// Throws InputError unless the grid is strictly increasing within [0, 1).
YieldCurve compute_yield_curve(const CorpusMatrix& corpus, const EsaIndex& index, std::span<const ModelKind> models,
                               const ModelSettings& settings, std::size_t k, std::span<const double> deltas);

void write_yield_csv(std::ostream& out, const YieldCurve& curve);

struct EvalYieldOptions {
  fs::path matrix;
  fs::path index;
  fs::path output;
  std::vector<ModelKind> models{ModelKind::lsa, ModelKind::lda, ModelKind::dictlearn};
  ModelSettings settings;
  std::size_t k = 4;
  std::vector<double> deltas;
};

/// Throws InvariantError if a count series increases along the grid.
YieldCurve run_eval_yield(const EvalYieldOptions& options);

/// {0.0, step, 2 step, ...} up to and including `last` (within rounding).
std::vector<double> delta_grid(double step, double last);

}  // namespace wordpuzzle
