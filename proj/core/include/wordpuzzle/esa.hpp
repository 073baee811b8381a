#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "wordpuzzle/corpus.hpp"

namespace wordpuzzle {

struct EsaConfig {
  TokenizerConfig tokenizer;
  /// Each word keeps at most this many concepts, the highest-weighted ones.
  std::size_t truncation = 1000;
};

struct ConceptWeight {
  std::uint32_t concept_id;
  double weight;

  friend bool operator==(const ConceptWeight&, const ConceptWeight&) = default;
};

struct Relatedness {
  double value = 0.0;
  /// False when either word is missing from the index; value is then 0.
  bool indexed = false;
};

/// Explicit semantic analysis index: every word maps to a sparse vector of
/// tf-idf weights over the concept documents. Immutable once built.
class EsaIndex {
 public:
  EsaIndex() = default;
  /// `words` strictly increasing; `vectors[i]` sorted by concept id with
  /// positive weights.
  EsaIndex(std::size_t concept_count, std::size_t truncation, std::vector<std::string> words,
           std::vector<std::vector<ConceptWeight>> vectors);

  std::size_t concept_count() const { return concept_count_; }
  std::size_t truncation() const { return truncation_; }
  std::size_t size() const { return words_.size(); }
  std::span<const std::string> words() const { return words_; }

  std::optional<std::uint32_t> find(std::string_view word) const;
  std::span<const ConceptWeight> vector(std::uint32_t id) const;
  /// Empty span for words not in the index.
  std::span<const ConceptWeight> vector(std::string_view word) const;

  /// Cosine of two indexed words' concept vectors; exactly 1 for id == other
  /// with a non-empty vector, 0 if either vector is empty.
  double cosine(std::uint32_t a, std::uint32_t b) const;
  Relatedness relatedness(std::string_view a, std::string_view b) const;

  friend bool operator==(const EsaIndex&, const EsaIndex&) = default;

 private:
  std::size_t concept_count_ = 0;
  std::size_t truncation_ = 0;
  std::vector<std::string> words_;
  std::vector<std::size_t> offsets_{0};
  std::vector<ConceptWeight> entries_;
  std::vector<double> squared_norms_;
};

/// Throws InputError on an empty concept corpus.
EsaIndex build_esa_index(std::span<const Document> concepts, const EsaConfig& config = {});

/// Versioned JSON header followed by per-word vectors sorted by concept id.
void save_esa_index(const std::filesystem::path& path, const EsaIndex& index);
EsaIndex load_esa_index(const std::filesystem::path& path);

/// Pairwise relatedness s(u, v) in [0, 1] over a fixed vocabulary.
/// Implementations must be symmetric and safe for concurrent callers.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;

  virtual std::size_t vocabulary_size() const = 0;
  virtual double relatedness(WordId a, WordId b) const = 0;
  /// Whether the word has a non-empty representation.
  virtual bool has_vector(WordId w) const = 0;

  /// S restricted to `words`; each unordered pair is computed once and
  /// mirrored, so the result is exactly symmetric.
  Eigen::MatrixXd similarity_submatrix(std::span<const WordId> words) const;
};

/// ESA-backed provider with a bounded memo of computed pairs.
class EsaSimilarity final : public SimilarityProvider {
 public:
  EsaSimilarity(std::shared_ptr<const EsaIndex> index, std::span<const std::string> vocabulary,
                std::size_t memo_capacity = std::size_t{1} << 20);

  std::size_t vocabulary_size() const override { return mapping_.size(); }
  double relatedness(WordId a, WordId b) const override;
  bool has_vector(WordId w) const override;

  bool indexed(WordId w) const { return mapping_.at(w).has_value(); }
  /// Number of relatedness queries that touched a word missing from the index.
  std::size_t unindexed_queries() const { return unindexed_queries_.load(std::memory_order_relaxed); }
  const EsaIndex& index() const { return *index_; }

 private:
  double compute(WordId a, WordId b) const;

  std::shared_ptr<const EsaIndex> index_;
  std::vector<std::optional<std::uint32_t>> mapping_;
  std::size_t memo_capacity_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::unordered_map<std::uint64_t, double> memo_;
  mutable std::atomic<std::size_t> unindexed_queries_{0};
};

}  // namespace wordpuzzle
