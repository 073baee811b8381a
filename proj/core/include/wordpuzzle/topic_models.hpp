#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wordpuzzle/corpus.hpp"
#include "wordpuzzle/rng.hpp"

namespace wordpuzzle {

enum class ModelKind { lsa, lda, dictlearn };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

/// N x K matrix whose columns are topics over the vocabulary.
struct TopicDictionary {
  ModelKind kind = ModelKind::lsa;
  Eigen::MatrixXd topics;
  /// Descending singular values; LSA only.
  std::vector<double> singular_values;
  std::uint64_t seed = 0;
  /// Fitting parameters, recorded for persistence.
  std::map<std::string, std::string> params;

  std::size_t vocabulary_size() const { return static_cast<std::size_t>(topics.rows()); }
  std::size_t topic_count() const { return static_cast<std::size_t>(topics.cols()); }
};

// ---------------------------------------------------------------------------
// LSA

struct LsaConfig {
  std::size_t topics = 400;
  std::uint64_t seed = 0;
  std::size_t power_iterations = 10;
  std::size_t oversampling = 8;
};

/// Top-K left singular vectors of X by a seeded randomized range finder.
/// Each column is sign-normalized so its largest-magnitude entry is positive.
/// Throws InputError when K is outside [1, min(N, M)] or exceeds the rank.
TopicDictionary lsa_fit(const DocTermMatrix& x, const LsaConfig& config);

// ---------------------------------------------------------------------------
// LDA

struct LdaConfig {
  std::size_t topics = 400;
  double alpha = 0.1;
  double beta = 0.01;
  std::size_t iterations = 200;
  std::uint64_t seed = 0;
  /// Fraction of final sweeps whose posterior means are averaged.
  double averaging_fraction = 0.2;
};

/// Collapsed Gibbs sampler over token-topic assignments.
///
/// Exposed separately from lda_fit so that callers can inspect the count
/// tables between sweeps.
class LdaGibbsSampler {
 public:
  LdaGibbsSampler(const DocTermMatrix& x, const LdaConfig& config);

  void sweep();

  std::size_t sweeps_done() const { return sweeps_; }
  std::size_t token_count() const { return token_word_.size(); }
  std::size_t vocabulary_size() const { return words_; }
  std::size_t topic_count() const { return topics_; }

  /// count(word, topic), row-major by word.
  std::uint32_t word_topic(std::size_t word, std::size_t topic) const {
    return word_topic_[word * topics_ + topic];
  }
  std::uint32_t topic_total(std::size_t topic) const { return topic_total_[topic]; }
  std::uint32_t doc_topic(std::size_t doc, std::size_t topic) const {
    return doc_topic_[doc * topics_ + topic];
  }

  /// (count(word, topic) + beta) / (count(topic) + N * beta) for the current state.
  Eigen::MatrixXd topic_word_distribution() const;

 private:
  std::size_t words_;
  std::size_t topics_;
  double alpha_;
  double beta_;
  Rng rng_;
  std::size_t sweeps_ = 0;
  std::vector<WordId> token_word_;
  std::vector<std::uint32_t> token_doc_;
  std::vector<std::uint32_t> token_topic_;
  std::vector<std::uint32_t> word_topic_;
  std::vector<std::uint32_t> doc_topic_;
  std::vector<std::uint32_t> topic_total_;
  std::vector<double> weights_;
};

/// Requires raw counts. The dictionary is the posterior-mean topic-word
/// distribution averaged over the final `averaging_fraction` of sweeps.
TopicDictionary lda_fit(const DocTermMatrix& x, const LdaConfig& config);

// ---------------------------------------------------------------------------
// Sparse coding and online dictionary learning

enum class Penalty { l1, group_l2 };

struct Regularizer {
  Penalty penalty = Penalty::l1;
  /// Contiguous block size for group_l2; the last block may be shorter.
  std::size_t group_size = 1;
};

std::string_view to_string(Penalty p);
Penalty penalty_from_string(std::string_view s);

/// Omega(alpha).
double penalty_value(const Eigen::VectorXd& alpha, const Regularizer& reg);

struct SparseCode {
  Eigen::VectorXd alpha;
  /// 0.5 * ||x - D alpha||^2 + kappa * Omega(alpha) at `alpha`.
  double objective = 0.0;
};

/// Solves min_alpha 0.5 ||x - D alpha||^2 + kappa Omega(alpha) by
/// (block) coordinate descent. The Gram matrix is computed once.
class SparseCoder {
 public:
  SparseCoder(const Eigen::MatrixXd& dictionary, double kappa, Regularizer reg);

  SparseCode encode(const Eigen::VectorXd& x) const;

  double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& alpha) const;

 private:
  Eigen::MatrixXd dict_;
  double kappa_;
  Regularizer reg_;
  Eigen::MatrixXd gram_;
  std::vector<double> block_lipschitz_;
};

SparseCode sparse_code(const Eigen::VectorXd& x, const Eigen::MatrixXd& dictionary, double kappa,
                       const Regularizer& reg);

struct DictLearnConfig {
  std::size_t topics = 400;
  double kappa = 0.1;
  double rho = 0.0;
  Regularizer regularizer;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, const Eigen::MatrixXd& dictionary)>;

/// Online alternation: for each document in index order, encode it against the
/// current dictionary, fold (i/M)^rho-weighted statistics into the running
/// sufficient statistics, then take one projected block-coordinate step on
/// every column. `on_epoch` sees the dictionary after each full pass.
TopicDictionary dict_learn_fit(const DocTermMatrix& x, const DictLearnConfig& config,
                               const EpochCallback& on_epoch = {});

// ---------------------------------------------------------------------------
// Top-k extraction

struct TopicWordSet {
  std::size_t topic = 0;
  std::vector<WordId> words;
  /// Significance of each word, non-increasing.
  std::vector<double> weights;
};

/// Significance is |entry| for LSA and the raw entry otherwise; ties go to
/// the lower word index.
std::vector<TopicWordSet> extract_top_k(const TopicDictionary& dict, std::size_t k);

// ---------------------------------------------------------------------------
// Persistence

struct TopicModelFile {
  TopicDictionary dict;
  std::vector<std::string> vocabulary;
};

/// Versioned JSON header plus a dense column-major payload. Doubles are
/// written in shortest round-trip form so loading is bit-exact.
void save_topic_model(const std::filesystem::path& path, const TopicDictionary& dict,
                      std::span<const std::string> vocabulary);
TopicModelFile load_topic_model(const std::filesystem::path& path);

}  // namespace wordpuzzle
